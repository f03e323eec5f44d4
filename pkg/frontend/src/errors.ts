export class PlotkitError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Bank overlays are 2-D figures; traces in any other dimension can't be drawn. */
export class NonPlanarTrace extends PlotkitError {}

/** A curve needs data: no tables, no rows, or fewer than two points. */
export class EmptyTable extends PlotkitError {}

/** Requested iteration is not present in the trace. */
export class IterationOutOfRange extends PlotkitError {}

/** A file doesn't match the schema it is supposed to carry. */
export class MalformedArtifact extends PlotkitError {}
