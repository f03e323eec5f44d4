import { MalformedArtifact } from "./errors.js";

export interface NumericTable {
  header: string[];
  rows: number[][];
}

/**
 * Strict numeric CSV reader for the harness artifacts. Every data line
 * must have exactly as many fields as the header and every field must
 * parse as a finite-or-infinite number; nothing is dropped silently, so
 * rows.length always equals the number of data lines in the file.
 */
export function parseNumericCsv(text: string): NumericTable {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new MalformedArtifact("empty file");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== header.length) {
      throw new MalformedArtifact(
        `line ${i + 1}: expected ${header.length} fields, got ${fields.length}`
      );
    }
    const row = fields.map((f) => Number(f));
    const bad = row.findIndex((v, j) => Number.isNaN(v) && fields[j].trim().toLowerCase() !== "nan");
    if (bad >= 0) {
      throw new MalformedArtifact(`line ${i + 1}: field ${header[bad]} is not numeric`);
    }
    rows.push(row);
  }
  return { header, rows };
}

export function column(table: NumericTable, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new MalformedArtifact(`missing column ${name} (have ${table.header.join(",")})`);
  }
  return table.rows.map((r) => r[idx]);
}
