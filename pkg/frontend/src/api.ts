/** Typed client for the search HTTP API. */

export interface SuggestionEntry {
  label: string;
  score: number;
  reverse?: boolean;
  source?: string | null;
  target?: string | null;
}

export interface Preselected {
  list: "words" | "classes" | "instances" | "relations";
  index: number;
}

export interface SuggestResponse {
  generation: number;
  words: SuggestionEntry[];
  classes: SuggestionEntry[];
  instances: SuggestionEntry[];
  relations: SuggestionEntry[];
  preselected: Preselected | null;
  timing_ms: number;
}

export interface ExcerptPayload {
  cid: number;
  doc: string;
  title: string;
  text: string;
  active: [number, number][];
}

export interface EvidencePayload {
  arc: string;
  kind: "context" | "fact";
  cid?: number;
  excerpt?: ExcerptPayload;
  subject?: string;
  relation?: string;
  object?: string;
}

export interface ResultGroup {
  entity: { id: number; name: string };
  score: number;
  evidence: EvidencePayload[];
}

export interface SearchResponse {
  generation: number;
  total: number;
  page: number;
  page_size: number;
  groups: ResultGroup[];
  timing_ms: number;
}

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const qs = new URLSearchParams(params).toString();
    const resp = await this.fetchFn(`${this.baseUrl}${path}?${qs}`);
    const body = (await resp.json()) as T & { error?: string };
    if (!resp.ok) {
      throw new ApiError(resp.status, body.error ?? `HTTP ${resp.status}`);
    }
    return body;
  }

  search(query: string, page = 0): Promise<SearchResponse> {
    return this.get("/search", { q: query, page: String(page) });
  }

  suggest(query: string, focus: string, typed: string): Promise<SuggestResponse> {
    return this.get("/suggest", { q: query, focus, typed });
  }

  meta(): Promise<{ generation: number; contexts: number }> {
    return this.get("/meta", {});
  }
}
