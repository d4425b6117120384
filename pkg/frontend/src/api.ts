import type {
  BreedDelta,
  ConfigDoc,
  PopulationListing,
  Score,
  ShaderBundle,
} from "./types";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  let body: unknown = null;
  try {
    body = await resp.json();
  } catch {
    // non-JSON error bodies fall through to the status message
  }
  if (!resp.ok) {
    const message =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `HTTP ${resp.status}`;
    throw new ApiError(resp.status, message);
  }
  return body as T;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private url(path: string): string {
    return `${this.base}/api/v1${path}`;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.url(path), {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    return asJson<T>(resp);
  }

  startRun(options: {
    mode?: "random";
    seeds?: string[];
    config?: Partial<ConfigDoc>;
    restart?: boolean;
    seed?: number;
  }): Promise<PopulationListing> {
    return this.request("POST", "/run", options);
  }

  population(page?: number, perPage?: number): Promise<PopulationListing> {
    const query =
      page === undefined ? "" : `?page=${page}&per_page=${perPage ?? 4}`;
    return this.request("GET", `/population${query}`);
  }

  shader(id: number): Promise<ShaderBundle> {
    return this.request("GET", `/individuals/${id}/shader`);
  }

  score(id: number, score: Score): Promise<{ id: number; score: Score }> {
    return this.request("POST", `/individuals/${id}/score`, { score });
  }

  breedAuto(): Promise<BreedDelta> {
    return this.request("POST", "/breed", { mode: "auto" });
  }

  breedManual(a: number, b: number): Promise<BreedDelta> {
    return this.request("POST", "/breed", { mode: "manual", parents: [a, b] });
  }

  save(id: number): Promise<{ id: number; file: string }> {
    return this.request("POST", `/individuals/${id}/save`);
  }

  getConfig(): Promise<ConfigDoc> {
    return this.request("GET", "/config");
  }

  putConfig(config: Partial<ConfigDoc>): Promise<ConfigDoc> {
    return this.request("PUT", "/config", config);
  }
}
