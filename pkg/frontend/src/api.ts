/** Typed client for the operator service. All console state comes from here. */

export type CandidateStatus =
  | "awaiting_classification"
  | "awaiting_approval"
  | "approved"
  | "rejected"
  | "posted"
  | "discarded";

export const ALL_STATUSES: CandidateStatus[] = [
  "awaiting_approval",
  "awaiting_classification",
  "approved",
  "posted",
  "rejected",
  "discarded",
];

export interface AuthorProfile {
  created_at_mms: number;
  favourites_count: number;
  followers_count: number;
  friends_count: number;
  listed_count: number;
  statuses_count: number;
  default_profile: boolean;
  default_profile_image: boolean;
  verified: boolean;
}

export interface ProposedMessage {
  message_id: string;
  text: string;
  source_tag: string;
  bin_id: number | null;
}

export interface Candidate {
  pending_id: string;
  candidate: {
    id: string;
    text: string;
    author: AuthorProfile;
    created_at: string;
    author_handle: string | null;
  };
  matched_keywords: string[];
  status: CandidateStatus;
  confidence: number | null;
  bin_id: number | null;
  proposed_message: ProposedMessage | null;
  timestamps: Record<string, string>;
}

export interface StatusSummary {
  scanner_enabled: boolean;
  model_loaded: boolean;
  counts: Record<CandidateStatus, number>;
  uptime_secs: number;
  last_event_id: number;
}

export interface TreeNodeJson {
  probs?: number[];
  leaf_id?: number | null;
  feature_name?: string | null;
  threshold?: number;
  n_samples: number;
  left?: TreeNodeJson;
  right?: TreeNodeJson;
}

export interface GroupModelJson {
  feature_names: string[];
  n_groups: number;
  tree: TreeNodeJson;
  bins: Record<string, { message_ids: string[]; representative_id: string }>;
  messages: Record<string, { message_id: string; text: string; source_tag: string }>;
}

export interface InterventionDetail {
  pending_id: string;
  bin_id: number;
  proposed_message: ProposedMessage;
  bin_path: Array<{
    feature_name: string;
    abbreviation: string;
    threshold: number;
    went_left: boolean;
  }>;
}

export interface UpdatesPayload {
  latest_event_id: number;
  events: Array<{ event_id: number; kind: string; payload: unknown }>;
}

/** Error carrying the service's {code, message} body and the HTTP status. */
export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiRequestError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      let code = "http_error";
      let message = `${response.status}`;
      try {
        const body = await response.json();
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        /* non-JSON error body; keep defaults */
      }
      throw new ApiRequestError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  status(): Promise<StatusSummary> {
    return this.request("/status");
  }

  setScanner(enabled: boolean): Promise<{ scanner_enabled: boolean }> {
    return this.request("/scanner", {
      method: "POST",
      body: JSON.stringify({ enabled }),
    });
  }

  candidates(status?: CandidateStatus, limit = 200, offset = 0) {
    const params = new URLSearchParams({ limit: `${limit}`, offset: `${offset}` });
    if (status) params.set("status", status);
    return this.request<{ items: Candidate[]; total: number }>(
      `/candidates?${params}`,
    );
  }

  approve(pendingId: string, operatorId = "console"): Promise<Candidate> {
    return this.request(`/candidates/${pendingId}/approve`, {
      method: "POST",
      body: JSON.stringify({ operator_id: operatorId }),
    });
  }

  reject(pendingId: string, operatorId = "console"): Promise<Candidate> {
    return this.request(`/candidates/${pendingId}/reject`, {
      method: "POST",
      body: JSON.stringify({ operator_id: operatorId }),
    });
  }

  intervention(pendingId: string): Promise<InterventionDetail> {
    return this.request(`/candidates/${pendingId}/intervention`);
  }

  modelTree(): Promise<GroupModelJson> {
    return this.request("/model/tree");
  }

  updates(since: number, timeoutSecs = 20): Promise<UpdatesPayload> {
    return this.request(
      `/candidates/updates?since=${since}&timeout_secs=${timeoutSecs}`,
    );
  }
}
