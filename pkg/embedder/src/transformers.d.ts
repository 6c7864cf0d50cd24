// optional runtime dependency, installed only for model mode; typed loosely
// so the build never requires it
declare module "@xenova/transformers" {
  export function pipeline(
    task: string,
    model: string,
    options?: object
  ): Promise<
    (texts: string[], options: object) => Promise<{ tolist(): number[][] }>
  >;
}
