import { describe, expect, it } from 'vitest';

import type { FrameInfo } from '../src/api.js';
import {
    addPrep,
    draftFromText,
    draftToText,
    emptyDraft,
    insertPdir,
    lintDraft,
    removePrep,
    toggleFrame,
} from '../src/draft.js';

function frame(name: string, requiresPval = false, example: string | null = null): FrameInfo {
    return {
        kind: 'vp-frame',
        name,
        requires_pval: requiresPval,
        example,
        features: [],
        constituents: [],
    };
}

const NP = frame('np');
const NP_PP = frame('np-pp', true);
const PP = frame('pp', true);

// Canonical lines as the service stores them; the serializer must hit
// these byte for byte.
const CANONICAL_LINES = [
    '(verb :orth "abandon" :subc ((np-pp :pval ("to")) (np)))',
    '(noun :orth "abandon" :features ((countable :pval ("with"))))',
    '(prep :orth "above")',
    '(adverb :orth "above")',
    '(adjective :orth "above" :features ((ainrn) (apreq)))',
    '(verb :orth "abstain" :subc ((intrans) (pp :pval ("from")) (p-ing-sc :pval ("from"))))',
    '(verb :orth "accept" :subc ((np) (that-s) (np-as-np)))',
    '(noun :orth "acceptance")',
];

describe('serialization', () => {
    it('round-trips every canonical sample line unchanged', () => {
        for (const line of CANONICAL_LINES) {
            expect(draftToText(draftFromText(line))).toBe(line);
        }
    });

    it('keeps morphology keys alphabetical and values as string lists', () => {
        const text = '(verb :orth "dream" :past ("dreamed" "dreamt") :past-part ("dreamt"))';
        const draft = draftFromText(text);
        expect(draft.morphology).toEqual({
            past: ['dreamed', 'dreamt'],
            'past-part': ['dreamt'],
        });
        expect(draftToText(draft)).toBe(text);
        // insertion order must not matter
        const reordered = emptyDraft('dream', 'verb');
        reordered.morphology['past-part'] = ['dreamt'];
        reordered.morphology['past'] = ['dreamed', 'dreamt'];
        expect(draftToText(reordered)).toBe(text);
    });

    it('escapes quotes and backslashes in the base form', () => {
        const draft = emptyDraft('a"b\\c', 'noun');
        expect(draftToText(draft)).toBe('(noun :orth "a\\"b\\\\c")');
    });

    it('serializes an empty preposition editor without a :pval list', () => {
        const draft = emptyDraft('abstain', 'verb');
        toggleFrame(draft, PP);
        expect(draft.subc[0]!.pval).toEqual([]);
        expect(draftToText(draft)).toBe('(verb :orth "abstain" :subc ((pp)))');
    });

    it('records the version the draft was opened from', () => {
        const draft = draftFromText(CANONICAL_LINES[0]!, 4);
        expect(draft.baseVersion).toBe(4);
        expect(emptyDraft('x', 'verb').baseVersion).toBeNull();
    });
});

describe('menu editing', () => {
    it('builds the abandon entry through menu operations byte-identically', () => {
        const draft = emptyDraft('abandon', 'verb');
        toggleFrame(draft, NP_PP);
        addPrep(draft, 'np-pp', 'to');
        toggleFrame(draft, NP);
        expect(draftToText(draft)).toBe(
            '(verb :orth "abandon" :subc ((np-pp :pval ("to")) (np)))',
        );
    });

    it('toggling a selected frame removes it again', () => {
        const draft = emptyDraft('accept', 'verb');
        toggleFrame(draft, NP);
        expect(draft.subc).toHaveLength(1);
        toggleFrame(draft, NP);
        expect(draft.subc).toHaveLength(0);
    });

    it('starts frames that need prepositions with an empty editable list', () => {
        const draft = emptyDraft('abstain', 'verb');
        toggleFrame(draft, PP);
        expect(draft.subc[0]).toEqual({ frame: 'pp', pval: [] });
        toggleFrame(draft, NP);
        expect(draft.subc[1]).toEqual({ frame: 'np', pval: null });
    });

    it('normalizes and deduplicates prepositions as entered', () => {
        const draft = emptyDraft('abstain', 'verb');
        toggleFrame(draft, PP);
        addPrep(draft, 'pp', '  From ');
        addPrep(draft, 'pp', 'from');
        addPrep(draft, 'pp', 'about');
        expect(draft.subc[0]!.pval).toEqual(['from', 'about']);
        removePrep(draft, 'pp', 'from');
        expect(draft.subc[0]!.pval).toEqual(['about']);
    });

    it('inserts the directional class with one click', () => {
        const draft = emptyDraft('run', 'verb');
        toggleFrame(draft, PP);
        insertPdir(draft, 'pp');
        expect(draftToText(draft)).toBe('(verb :orth "run" :subc ((pp :pval ("p-dir"))))');
    });
});

describe('lint', () => {
    const FRAMES = [NP, NP_PP, PP];

    it('flags a preposition frame left without prepositions', () => {
        const draft = emptyDraft('abandon', 'verb');
        toggleFrame(draft, PP);
        const issues = lintDraft(draft, FRAMES);
        expect(issues).toEqual([
            {
                code: 'missing-pval',
                frame: 'pp',
                message: 'pp needs at least one preposition',
            },
        ]);
        addPrep(draft, 'pp', 'from');
        expect(lintDraft(draft, FRAMES)).toEqual([]);
    });

    it('requires part of speech and base form before save', () => {
        const codes = lintDraft(emptyDraft(), FRAMES).map((i) => i.code);
        expect(codes).toEqual(['missing-pos', 'missing-orth']);
    });

    it('reports frames the registry does not know', () => {
        const draft = emptyDraft('x', 'verb');
        draft.subc.push({ frame: 'zz-top', pval: null });
        expect(lintDraft(draft, FRAMES)).toEqual([
            { code: 'unknown-frame', frame: 'zz-top', message: 'no frame named zz-top' },
        ]);
    });
});
