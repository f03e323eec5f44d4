import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import path from "path";
import { fileURLToPath } from "url";
import { afterEach, describe, expect, it, vi } from "vitest";

import { main } from "../src/cli.js";

const FIXTURES = fileURLToPath(new URL("../fixtures", import.meta.url));
const TRACE = path.join(FIXTURES, "toy", "trace_0.csv");
const GRID = path.join(FIXTURES, "toy", "grid.csv");
const SWEEP = path.join(FIXTURES, "banana", "sweep_summary.json");

function outDir(): string {
  return mkdtempSync(path.join(tmpdir(), "plotkit-"));
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("plotkit bank", () => {
  it("regenerates the bank overlay from the committed fixtures", () => {
    const out = path.join(outDir(), "toy_bank.svg");
    const code = main(["bank", "--trace", TRACE, "--grid", GRID, "--t", "20", "--out", out]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
  });

  it("defaults to the last iteration when --t is omitted", () => {
    const out = path.join(outDir(), "last.svg");
    expect(main(["bank", "--trace", TRACE, "--grid", GRID, "--out", out])).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("t=20");
  });

  it("fails cleanly on an out-of-range iteration", () => {
    const err = vi.spyOn(console, "error").mockImplementation(() => {});
    const out = path.join(outDir(), "nope.svg");
    const code = main(["bank", "--trace", TRACE, "--grid", GRID, "--t", "99", "--out", out]);
    expect(code).toBe(1);
    expect(existsSync(out)).toBe(false);
    expect(err).toHaveBeenCalled();
  });

  it("fails cleanly on a missing file", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    const out = path.join(outDir(), "nope.svg");
    expect(main(["bank", "--trace", "/no/such.csv", "--grid", GRID, "--out", out])).toBe(1);
  });

  it("requires --trace", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["bank", "--grid", GRID, "--out", "x.svg"])).toBe(1);
  });
});

describe("plotkit curve", () => {
  it("regenerates the MSE-vs-dimension curve from the committed fixture", () => {
    const out = path.join(outDir(), "banana_mse.svg");
    const code = main([
      "curve",
      "--summary",
      SWEEP,
      "--axis",
      "dimension",
      "--log-y",
      "--out",
      out,
    ]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain('class="curve"');
    expect(svg).toContain("dimension");
  });

  it("rejects an axis the summary does not sweep", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    const out = path.join(outDir(), "bad.svg");
    expect(
      main(["curve", "--summary", SWEEP, "--axis", "iterations", "--out", out])
    ).toBe(1);
  });
});

describe("plotkit argv handling", () => {
  it("unknown command exits 1", () => {
    vi.spyOn(console, "error").mockImplementation(() => {});
    expect(main(["scatter"])).toBe(1);
  });

  it("--help exits 0", () => {
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    expect(main(["--help"])).toBe(0);
    expect(log.mock.calls.flat().join("\n")).toContain("usage");
  });

  it("no arguments prints usage and exits 1", () => {
    vi.spyOn(console, "log").mockImplementation(() => {});
    expect(main([])).toBe(1);
  });
});
