import type { FlagRecord, FlagUpdate, Meta, Source, WindowPayload } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { error?: string };
      if (body.error) detail = body.error;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

/** What the session needs from the service; ApiClient is the real one. */
export interface ReviewApi {
  getMeta(): Promise<Meta>;
  getWindow(start: string, end: string, source: Source): Promise<WindowPayload>;
  getFlags(source: Source): Promise<FlagRecord[]>;
  postFlags(source: Source, updates: FlagUpdate[]): Promise<number>;
}

/** Thin client for the review service JSON API. */
export class ApiClient implements ReviewApi {
  constructor(private baseUrl: string = "") {}

  async getMeta(): Promise<Meta> {
    return asJson(await fetch(`${this.baseUrl}/api/meta`));
  }

  async getWindow(start: string, end: string, source: Source): Promise<WindowPayload> {
    const query = new URLSearchParams({ start, end, source });
    return asJson(await fetch(`${this.baseUrl}/api/window?${query}`));
  }

  async getFlags(source: Source): Promise<FlagRecord[]> {
    const query = new URLSearchParams({ source });
    return asJson(await fetch(`${this.baseUrl}/api/flags?${query}`));
  }

  async postFlags(source: Source, updates: FlagUpdate[]): Promise<number> {
    const response = await fetch(`${this.baseUrl}/api/flags`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ source, updates }),
    });
    const body = await asJson<{ applied: number }>(response);
    return body.applied;
  }
}
