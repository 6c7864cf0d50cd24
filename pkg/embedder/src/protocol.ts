/**
 * Wire protocol: one JSON record per line in both directions.
 *
 *   {"id": N, "op": "hello"}                 -> {"id": N, "dim": D}
 *   {"id": N, "op": "embed", "texts": [...]} -> {"id": N, "vectors": [[...], ...]}
 *
 * Anything unparseable or invalid gets {"id": ..., "error": "..."} back,
 * with id -1 when no request id could be recovered. The session never
 * dies on bad input; every request line yields exactly one response.
 */

export type Request =
  | { id: number; op: "hello" }
  | { id: number; op: "embed"; texts: string[] };

export type Response =
  | { id: number; dim: number }
  | { id: number; vectors: number[][] }
  | { id: number; error: string };

export function errorResponse(id: number, message: string): Response {
  return { id, error: message };
}

/** Parse one request line; throws with a salvaged id attached on bad input. */
export class RequestError extends Error {
  constructor(readonly id: number, message: string) {
    super(message);
  }
}

function salvageId(value: unknown): number {
  if (
    typeof value === "object" &&
    value !== null &&
    Number.isInteger((value as { id?: unknown }).id)
  ) {
    return (value as { id: number }).id;
  }
  return -1;
}

export function parseRequest(line: string): Request {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch (err) {
    throw new RequestError(-1, `invalid JSON: ${(err as Error).message}`);
  }
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new RequestError(-1, "request must be a JSON object");
  }
  const record = value as Record<string, unknown>;
  if (!Number.isInteger(record.id)) {
    throw new RequestError(-1, "request needs an integer 'id'");
  }
  const id = record.id as number;
  if (record.op === "hello") {
    return { id, op: "hello" };
  }
  if (record.op === "embed") {
    const texts = record.texts;
    if (!Array.isArray(texts) || texts.some((t) => typeof t !== "string")) {
      throw new RequestError(id, "'texts' must be an array of strings");
    }
    return { id, op: "embed", texts: texts as string[] };
  }
  throw new RequestError(id, `unknown op ${JSON.stringify(record.op)}`);
}
