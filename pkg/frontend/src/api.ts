// Typed client for the lexicon service.  Every workbench mutation goes
// through this module; the browser never touches lexicon files.

export interface DiagnosticInfo {
    severity: 'error' | 'warning';
    code: string;
    message: string;
    locus: Array<number | string> | null;
}

export interface EntryHit {
    lexicon: string;
    orth: string;
    pos: string;
    version: number;
    text: string;
}

export interface SaveResult extends EntryHit {
    warnings: DiagnosticInfo[];
}

export interface ValidateResult {
    orth: string;
    pos: string;
    valid: boolean;
    canonical: string;
    diagnostics: DiagnosticInfo[];
}

export interface FrameConstituent {
    category: string;
    index: number | null;
    options: Record<string, unknown>;
}

export interface FrameInfo {
    kind: string;
    name: string;
    requires_pval: boolean;
    example: string | null;
    features: Array<[string, string]>;
    constituents: FrameConstituent[];
}

export interface KwicLineInfo {
    doc_id: number;
    source: string;
    left: string;
    match: string;
    right: string;
    span: [number, number];
}

export interface InstanceInfo {
    id: string;
    lemma: string;
    pos: string;
    frame: string;
    preps: string[];
    labels: string[];
    flag: string | null;
    annotator: string;
    sentence: string;
}

export class ServiceUnavailableError extends Error {
    constructor(message: string) {
        super(message);
        this.name = 'ServiceUnavailableError';
    }
}

export class RequestError extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
        this.name = 'RequestError';
    }
}

export class VersionConflictError extends Error {
    constructor(
        message: string,
        readonly currentVersion: number,
        readonly serverText: string | null,
    ) {
        super(message);
        this.name = 'VersionConflictError';
    }
}

export class ValidationFailedError extends Error {
    constructor(message: string, readonly diagnostics: DiagnosticInfo[]) {
        super(message);
        this.name = 'ValidationFailedError';
    }
}

export interface SaveEntryParams {
    lexicon: string;
    text: string;
    expectedVersion: number | null;
    annotator: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function detailOf(response: Response): Promise<unknown> {
    try {
        const body = (await response.json()) as { detail?: unknown };
        return body.detail ?? body;
    } catch {
        return null;
    }
}

function detailMessage(detail: unknown, fallback: string): string {
    if (typeof detail === 'string') return detail;
    if (detail && typeof detail === 'object' && 'message' in detail) {
        const msg = (detail as { message?: unknown }).message;
        if (typeof msg === 'string') return msg;
    }
    return fallback;
}

export class ApiClient {
    constructor(
        readonly baseUrl: string,
        private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    ) {}

    private async request(path: string, init?: RequestInit): Promise<Response> {
        let response: Response;
        try {
            response = await this.fetchFn(this.baseUrl + path, init);
        } catch (err) {
            throw new ServiceUnavailableError(`service unreachable: ${String(err)}`);
        }
        return response;
    }

    private async getJson<T>(path: string): Promise<T> {
        const response = await this.request(path);
        if (!response.ok) {
            const detail = await detailOf(response);
            throw new RequestError(response.status, detailMessage(detail, response.statusText));
        }
        return (await response.json()) as T;
    }

    getEntries(orth: string): Promise<EntryHit[]> {
        return this.getJson<EntryHit[]>(`/entries/${encodeURIComponent(orth)}`);
    }

    getFrames(): Promise<FrameInfo[]> {
        return this.getJson<FrameInfo[]>('/frames');
    }

    /** Concordance lines; a store without a corpus yields an empty pane. */
    async getKwic(forms: string[], window = 40, limit = 25): Promise<KwicLineInfo[]> {
        const params = new URLSearchParams({
            forms: forms.join(','),
            window: String(window),
            limit: String(limit),
        });
        const response = await this.request(`/kwic?${params}`);
        if (response.status === 404) return [];
        if (!response.ok) {
            const detail = await detailOf(response);
            throw new RequestError(response.status, detailMessage(detail, response.statusText));
        }
        return (await response.json()) as KwicLineInfo[];
    }

    async saveEntry(params: SaveEntryParams): Promise<SaveResult> {
        const response = await this.request('/entries', {
            method: 'PUT',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify({
                lexicon: params.lexicon,
                text: params.text,
                expected_version: params.expectedVersion,
                annotator: params.annotator,
            }),
        });
        if (response.status === 409) {
            const detail = (await detailOf(response)) as {
                message?: string;
                current_version?: number;
                server_text?: string | null;
            } | null;
            throw new VersionConflictError(
                detail?.message ?? 'version conflict',
                detail?.current_version ?? 0,
                detail?.server_text ?? null,
            );
        }
        if (response.status === 422) {
            const detail = (await detailOf(response)) as {
                message?: string;
                diagnostics?: DiagnosticInfo[];
            } | null;
            throw new ValidationFailedError(
                detail?.message ?? 'entry rejected',
                detail?.diagnostics ?? [],
            );
        }
        if (!response.ok) {
            const detail = await detailOf(response);
            throw new RequestError(response.status, detailMessage(detail, response.statusText));
        }
        return (await response.json()) as SaveResult;
    }

    async validateEntry(text: string, strict = false): Promise<ValidateResult> {
        const response = await this.request('/validate', {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify({ text, strict }),
        });
        if (response.status === 422) {
            const detail = (await detailOf(response)) as {
                message?: string;
                diagnostics?: DiagnosticInfo[];
            } | null;
            throw new ValidationFailedError(
                detail?.message ?? 'entry rejected',
                detail?.diagnostics ?? [],
            );
        }
        if (!response.ok) {
            const detail = await detailOf(response);
            throw new RequestError(response.status, detailMessage(detail, response.statusText));
        }
        return (await response.json()) as ValidateResult;
    }

    async appendInstances(name: string, instances: InstanceInfo[]): Promise<number> {
        const response = await this.request('/instances', {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify({ name, instances }),
        });
        if (!response.ok) {
            const detail = await detailOf(response);
            throw new RequestError(response.status, detailMessage(detail, response.statusText));
        }
        const body = (await response.json()) as { count: number };
        return body.count;
    }

    getInstances(
        name: string,
        filter: { annotator?: string; lemma?: string } = {},
    ): Promise<InstanceInfo[]> {
        const params = new URLSearchParams({ name });
        if (filter.annotator !== undefined) params.set('annotator', filter.annotator);
        if (filter.lemma !== undefined) params.set('lemma', filter.lemma);
        return this.getJson<InstanceInfo[]>(`/instances?${params}`);
    }
}
