import { describe, expect, it } from 'vitest';

import {
    ApiClient,
    RequestError,
    ServiceUnavailableError,
    ValidationFailedError,
    VersionConflictError,
} from '../src/api.js';

type Handler = (input: string, init?: RequestInit) => Response | Promise<Response>;

function client(handler: Handler): ApiClient {
    return new ApiClient('http://svc', (input, init) => Promise.resolve(handler(input, init)));
}

function json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
        status,
        headers: { 'content-type': 'application/json' },
    });
}

describe('entry lookups', () => {
    it('fetches entries for a headword', async () => {
        const hits = [
            { lexicon: 'work', orth: 'abandon', pos: 'verb', version: 1, text: '(verb...)' },
        ];
        const api = client((input) => {
            expect(input).toBe('http://svc/entries/abandon');
            return json(hits);
        });
        expect(await api.getEntries('abandon')).toEqual(hits);
    });

    it('escapes odd headwords in the path', async () => {
        const api = client((input) => {
            expect(input).toBe('http://svc/entries/s%2Fhe');
            return json([]);
        });
        await api.getEntries('s/he');
    });

    it('turns fetch failures into a service-unavailable error', async () => {
        const api = new ApiClient('http://svc', () => {
            throw new TypeError('fetch failed');
        });
        await expect(api.getEntries('x')).rejects.toBeInstanceOf(ServiceUnavailableError);
    });
});

describe('saving entries', () => {
    it('sends the wire fields and returns the save result', async () => {
        const api = client((input, init) => {
            expect(input).toBe('http://svc/entries');
            expect(init?.method).toBe('PUT');
            expect(JSON.parse(String(init?.body))).toEqual({
                lexicon: 'work',
                text: '(verb :orth "accept" :subc ((np)))',
                expected_version: null,
                annotator: 'ann1',
            });
            return json({
                lexicon: 'work',
                orth: 'accept',
                pos: 'verb',
                version: 1,
                text: '(verb :orth "accept" :subc ((np)))',
                warnings: [],
            });
        });
        const result = await api.saveEntry({
            lexicon: 'work',
            text: '(verb :orth "accept" :subc ((np)))',
            expectedVersion: null,
            annotator: 'ann1',
        });
        expect(result.version).toBe(1);
    });

    it('raises a typed conflict carrying version and server text', async () => {
        const api = client(() =>
            json(
                {
                    detail: {
                        message: 'stale',
                        current_version: 3,
                        server_text: '(verb :orth "accept" :subc ((np)))',
                    },
                },
                409,
            ),
        );
        const attempt = api.saveEntry({
            lexicon: 'work',
            text: 'x',
            expectedVersion: 1,
            annotator: '',
        });
        await expect(attempt).rejects.toMatchObject({
            name: 'VersionConflictError',
            currentVersion: 3,
            serverText: '(verb :orth "accept" :subc ((np)))',
        });
        await attempt.catch((err) => expect(err).toBeInstanceOf(VersionConflictError));
    });

    it('raises a typed validation failure with the diagnostics', async () => {
        const diag = {
            severity: 'error',
            code: 'unknown-frame',
            message: 'no such frame zz',
            locus: null,
        };
        const api = client(() => json({ detail: { message: 'invalid', diagnostics: [diag] } }, 422));
        await expect(
            api.saveEntry({ lexicon: 'work', text: 'x', expectedVersion: null, annotator: '' }),
        ).rejects.toMatchObject({ name: 'ValidationFailedError', diagnostics: [diag] });
        await api
            .saveEntry({ lexicon: 'work', text: 'x', expectedVersion: null, annotator: '' })
            .catch((err) => expect(err).toBeInstanceOf(ValidationFailedError));
    });

    it('reports other statuses as request errors with the detail text', async () => {
        const api = client(() => json({ detail: 'expected exactly one entry form, got 2' }, 400));
        await expect(
            api.saveEntry({ lexicon: 'work', text: 'x', expectedVersion: null, annotator: '' }),
        ).rejects.toMatchObject({
            name: 'RequestError',
            status: 400,
            message: 'expected exactly one entry form, got 2',
        });
    });
});

describe('concordance and instances', () => {
    it('builds the kwic query string and parses lines', async () => {
        const line = {
            doc_id: 0,
            source: 'a.txt',
            left: 'They ',
            match: 'abandoned',
            right: ' it',
            span: [0, 17] as [number, number],
        };
        const api = client((input) => {
            expect(input).toBe('http://svc/kwic?forms=abandon%2Cabandoned&window=20&limit=5');
            return json([line]);
        });
        expect(await api.getKwic(['abandon', 'abandoned'], 20, 5)).toEqual([line]);
    });

    it('treats a corpus-less store as an empty concordance', async () => {
        const api = client(() => json({ detail: 'store has no corpus directory' }, 404));
        expect(await api.getKwic(['x'])).toEqual([]);
    });

    it('round-trips instance appends and filtered reads', async () => {
        const instance = {
            id: 'abandon:0:0',
            lemma: 'abandon',
            pos: 'verb',
            frame: 'np',
            preps: [],
            labels: [],
            flag: 'difficult',
            annotator: 'ann1',
            sentence: 'They abandoned it',
        };
        const api = client((input, init) => {
            if (init?.method === 'POST') {
                expect(input).toBe('http://svc/instances');
                return json({ name: 'instances', count: 1 });
            }
            expect(input).toBe('http://svc/instances?name=instances&lemma=abandon');
            return json([instance]);
        });
        expect(await api.appendInstances('instances', [instance])).toBe(1);
        expect(await api.getInstances('instances', { lemma: 'abandon' })).toEqual([instance]);
    });

    it('surfaces duplicate-id rejections from the instance store', async () => {
        const api = client(() => json({ detail: 'duplicate instance id' }, 422));
        await expect(api.appendInstances('instances', [])).rejects.toBeInstanceOf(RequestError);
    });
});
