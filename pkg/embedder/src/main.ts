/**
 * Entry point. Examples:
 *
 *   node dist/main.js --fixture --dim 32
 *   node dist/main.js --model Xenova/paraphrase-multilingual-MiniLM-L12-v2
 *   node dist/main.js --fixture --listen tcp --port 8791
 *
 * The protocol runs on stdout (or the TCP socket); all diagnostics go to
 * stderr so they never corrupt the stream.
 */

import { createServer } from "node:net";
import { createInterface } from "node:readline";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { Encoder, FixtureEncoder, loadModelEncoder } from "./encoder.js";
import { Response } from "./protocol.js";
import { serve } from "./server.js";

const DEFAULT_MODEL = "Xenova/paraphrase-multilingual-MiniLM-L12-v2";

interface EmbedderConfig {
  model: string;
  device: string;
  batchSize: number;
  listen: "stdio" | "tcp";
  port?: number;
  fixture: boolean;
  dim: number;
}

function usageError(message: string): never {
  console.error(`error: ${message}`);
  console.error(
    "usage: main.js [--fixture] [--dim N] [--model NAME] [--device DEV]" +
      " [--batch-size N] [--listen stdio|tcp] [--port N]"
  );
  process.exit(2);
}

function parsePositiveInt(raw: string, flag: string): number {
  const value = Number(raw);
  if (!Number.isInteger(value) || value < 1) {
    usageError(`${flag} must be a positive integer, got ${raw}`);
  }
  return value;
}

export function parseConfig(argv: string[]): EmbedderConfig {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        model: { type: "string", default: DEFAULT_MODEL },
        device: { type: "string", default: "cpu" },
        "batch-size": { type: "string", default: "32" },
        listen: { type: "string", default: "stdio" },
        port: { type: "string" },
        fixture: { type: "boolean", default: false },
        dim: { type: "string", default: "32" },
      },
    }));
  } catch (err) {
    usageError((err as Error).message);
  }
  const listen = values.listen as string;
  if (listen !== "stdio" && listen !== "tcp") {
    usageError(`--listen must be stdio or tcp, got ${listen}`);
  }
  // port goes with tcp mode and only with tcp mode
  if (listen === "tcp" && values.port === undefined) {
    usageError("--listen tcp requires --port");
  }
  if (listen === "stdio" && values.port !== undefined) {
    usageError("--port only applies to --listen tcp");
  }
  return {
    model: values.model as string,
    device: values.device as string,
    batchSize: parsePositiveInt(values["batch-size"] as string, "--batch-size"),
    listen,
    port: values.port === undefined ? undefined : parsePositiveInt(values.port, "--port"),
    fixture: values.fixture as boolean,
    dim: parsePositiveInt(values.dim as string, "--dim"),
  };
}

async function makeEncoder(config: EmbedderConfig): Promise<Encoder> {
  if (config.fixture) {
    return new FixtureEncoder(config.dim);
  }
  return loadModelEncoder(config.model, config.device);
}

function serveStdio(encoder: Encoder, batchSize: number): void {
  const lines = createInterface({ input: process.stdin, crlfDelay: Infinity });
  const write = (response: Response) => {
    process.stdout.write(JSON.stringify(response) + "\n");
  };
  console.error(`listening on stdio, encoder ${encoder.name}, dim ${encoder.dim}`);
  void serve(lines, write, { encoder, batchSize });
}

function serveTcp(encoder: Encoder, batchSize: number, port: number): void {
  const server = createServer((socket) => {
    const lines = createInterface({ input: socket, crlfDelay: Infinity });
    const write = (response: Response) => {
      socket.write(JSON.stringify(response) + "\n");
    };
    socket.on("error", () => socket.destroy());
    void serve(lines, write, { encoder, batchSize });
  });
  server.listen(port, "127.0.0.1", () => {
    console.error(`listening on tcp://127.0.0.1:${port}, encoder ${encoder.name}, dim ${encoder.dim}`);
  });
}

async function main(): Promise<void> {
  const config = parseConfig(process.argv.slice(2));
  let encoder: Encoder;
  try {
    encoder = await makeEncoder(config);
  } catch (err) {
    // model load failure is a startup error: report and exit nonzero
    console.error(`error: ${(err as Error).message ?? err}`);
    process.exit(1);
  }
  if (config.listen === "tcp") {
    serveTcp(encoder, config.batchSize, config.port as number);
  } else {
    serveStdio(encoder, config.batchSize);
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (invokedDirectly) {
  void main();
}
