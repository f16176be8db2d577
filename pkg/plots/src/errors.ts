/** Input file absent or empty: nothing to draw. */
export class MissingInput extends Error {
  constructor(message: string) {
    super(message);
    this.name = "MissingInput";
  }
}

/** Input file present but not shaped like documented CLI output. */
export class SchemaMismatch extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaMismatch";
  }
}
