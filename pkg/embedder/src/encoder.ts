/**
 * Text encoders behind a single interface: the hash fixture for hermetic
 * tests and a pretrained multilingual sentence encoder for real use.
 */

import { fixtureVector } from "./fixture.js";

export interface Encoder {
  readonly dim: number;
  readonly name: string;
  encode(texts: string[]): Promise<number[][]>;
}

export class FixtureEncoder implements Encoder {
  readonly name = "fixture";

  constructor(readonly dim: number) {
    if (!Number.isInteger(dim) || dim < 1) {
      throw new Error(`fixture dim must be a positive integer, got ${dim}`);
    }
  }

  async encode(texts: string[]): Promise<number[][]> {
    return texts.map((text) => fixtureVector(text, this.dim));
  }
}

/** Unit-normalize in place; an all-zero vector becomes the first basis vector. */
export function unitNormalize(vector: number[]): number[] {
  const norm = Math.sqrt(vector.reduce((acc, v) => acc + v * v, 0));
  if (norm === 0) {
    const out = vector.map(() => 0);
    out[0] = 1.0;
    return out;
  }
  return vector.map((v) => v / norm);
}

class ModelEncoder implements Encoder {
  constructor(
    readonly name: string,
    readonly dim: number,
    private readonly extractor: (
      texts: string[],
      options: object
    ) => Promise<{ tolist(): number[][] }>
  ) {}

  async encode(texts: string[]): Promise<number[][]> {
    if (texts.length === 0) {
      return [];
    }
    const output = await this.extractor(texts, { pooling: "mean", normalize: false });
    return output.tolist().map(unitNormalize);
  }
}

/**
 * Load a pretrained sentence encoder via transformers.js. The package is an
 * optional install (models also need a one-time download), so failure here
 * is reported as a startup error by the caller rather than handled.
 */
export async function loadModelEncoder(model: string, device: string): Promise<Encoder> {
  let transformers;
  try {
    transformers = await import("@xenova/transformers");
  } catch (err) {
    throw new Error(
      `cannot import @xenova/transformers (install it to use model mode): ${err}`
    );
  }
  const extractor = await transformers.pipeline("feature-extraction", model, {
    device,
  } as object);
  const probe = await extractor(["kích thước"], { pooling: "mean", normalize: false });
  const dim = probe.tolist()[0].length;
  return new ModelEncoder(model, dim, extractor);
}
