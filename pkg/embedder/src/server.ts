import { Encoder } from "./encoder.js";
import { RequestError, Response, errorResponse, parseRequest } from "./protocol.js";

export interface ServeOptions {
  encoder: Encoder;
  batchSize: number;
}

/** Encode in batches so a huge request cannot monopolize the model. */
async function embedBatched(
  encoder: Encoder,
  texts: string[],
  batchSize: number
): Promise<number[][]> {
  const vectors: number[][] = [];
  for (let start = 0; start < texts.length; start += batchSize) {
    const chunk = texts.slice(start, start + batchSize);
    vectors.push(...(await encoder.encode(chunk)));
  }
  return vectors;
}

/**
 * Answer every request line with exactly one response record. Malformed
 * input produces an error record instead of ending the session.
 */
export async function serve(
  lines: AsyncIterable<string>,
  write: (response: Response) => void,
  options: ServeOptions
): Promise<void> {
  const { encoder, batchSize } = options;
  for await (const line of lines) {
    if (line.trim() === "") {
      continue;
    }
    let response: Response;
    let requestId = -1;
    try {
      const request = parseRequest(line);
      requestId = request.id;
      if (request.op === "hello") {
        response = { id: request.id, dim: encoder.dim };
      } else {
        const vectors = await embedBatched(encoder, request.texts, batchSize);
        response = { id: request.id, vectors };
      }
    } catch (err) {
      response =
        err instanceof RequestError
          ? errorResponse(err.id, err.message)
          : errorResponse(requestId, `internal error: ${err}`);
    }
    write(response);
  }
}
