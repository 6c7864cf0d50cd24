/**
 * Deterministic hash-expansion embeddings for tests.
 *
 * A text seeds a 32-bit FNV-1a hash over its UTF-8 bytes; a linear
 * congruential generator expands the seed into `dim` values in [-1, 1);
 * the vector is then normalized to unit Euclidean norm. Integer state
 * never leaves 32 bits and every float step is exact in IEEE doubles,
 * so any language reproduces the same vectors bit for bit.
 */

const FNV_OFFSET = 2166136261;
const FNV_PRIME = 16777619;
const LCG_A = 1664525;
const LCG_C = 1013904223;
const TWO_32 = 4294967296;
const TWO_31 = 2147483648;

const utf8 = new TextEncoder();

export function fnv1a32(text: string): number {
  let h = FNV_OFFSET;
  for (const byte of utf8.encode(text)) {
    // Math.imul keeps the multiply in 32-bit space; >>> 0 makes it unsigned
    h = Math.imul(h ^ byte, FNV_PRIME) >>> 0;
  }
  return h;
}

export function fixtureVector(text: string, dim: number): number[] {
  if (!Number.isInteger(dim) || dim < 1) {
    throw new Error(`dim must be a positive integer, got ${dim}`);
  }
  let x = fnv1a32(text);
  const values = new Array<number>(dim);
  for (let k = 0; k < dim; k++) {
    // products stay below 2^53, so plain doubles carry the LCG exactly
    x = (LCG_A * x + LCG_C) % TWO_32;
    values[k] = x / TWO_31 - 1.0;
  }
  const norm = Math.sqrt(values.reduce((acc, v) => acc + v * v, 0));
  if (norm === 0) {
    values.fill(0);
    values[0] = 1.0;
    return values;
  }
  return values.map((v) => v / norm);
}
