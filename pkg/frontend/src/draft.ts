// The editor's working copy of one entry.  Drafts live entirely in the
// browser; nothing touches the store until the draft is saved through
// the service.

import type { FrameInfo } from './api.js';
import { SNode, atom, list, parseOne, printNode, str } from './sexpr.js';

export const P_DIR = 'p-dir';

export const POS_CHOICES = ['adjective', 'adverb', 'noun', 'prep', 'verb'] as const;

export interface SubcatDraft {
    frame: string;
    /** null: frame takes no preposition list; []: required but still empty. */
    pval: string[] | null;
}

export interface FeatureDraft {
    name: string;
    params: Array<[string, string[]]>;
}

export interface EntryDraft {
    pos: string;
    orth: string;
    morphology: Record<string, string[]>;
    features: FeatureDraft[];
    subc: SubcatDraft[];
    /** Version the draft was loaded from; null means "new entry". */
    baseVersion: number | null;
}

export function emptyDraft(orth = '', pos = ''): EntryDraft {
    return { pos, orth, morphology: {}, features: [], subc: [], baseVersion: null };
}

export function cloneDraft(draft: EntryDraft): EntryDraft {
    return {
        pos: draft.pos,
        orth: draft.orth,
        morphology: Object.fromEntries(
            Object.entries(draft.morphology).map(([k, v]) => [k, [...v]]),
        ),
        features: draft.features.map((f) => ({
            name: f.name,
            params: f.params.map(([k, v]) => [k, [...v]] as [string, string[]]),
        })),
        subc: draft.subc.map((s) => ({ frame: s.frame, pval: s.pval ? [...s.pval] : s.pval })),
        baseVersion: draft.baseVersion,
    };
}

// ---------------------------------------------------------------- reading

function expectList(node: SNode, what: string): SNode[] {
    if (node.kind !== 'list') throw new Error(`expected a list for ${what}`);
    return node.items;
}

function stringItems(node: SNode, what: string): string[] {
    return expectList(node, what).map((item) => {
        if (item.kind !== 'string') throw new Error(`expected strings in ${what}`);
        return item.text;
    });
}

function readSpec(node: SNode, what: string): { name: string; params: Array<[string, string[]]> } {
    const items = expectList(node, what);
    const head = items[0];
    if (!head || head.kind !== 'atom') throw new Error(`${what} must start with a name`);
    const params: Array<[string, string[]]> = [];
    for (let i = 1; i + 1 < items.length; i += 2) {
        const key = items[i]!;
        if (key.kind !== 'atom' || !key.text.startsWith(':')) {
            throw new Error(`${what} ${head.text}: expected :key value pairs`);
        }
        params.push([key.text.slice(1), stringItems(items[i + 1]!, `${what} ${key.text}`)]);
    }
    return { name: head.text, params };
}

/** Open an entry in canonical text form (as returned by the service). */
export function draftFromText(text: string, baseVersion: number | null = null): EntryDraft {
    const items = expectList(parseOne(text), 'entry');
    const head = items[0];
    if (!head || head.kind !== 'atom') throw new Error('entry must start with a part of speech');
    const draft = emptyDraft('', head.text);
    draft.baseVersion = baseVersion;
    for (let i = 1; i + 1 < items.length; i += 2) {
        const key = items[i]!;
        const value = items[i + 1]!;
        if (key.kind !== 'atom' || !key.text.startsWith(':')) {
            throw new Error('entry fields must be :key value pairs');
        }
        const field = key.text.slice(1);
        if (field === 'orth') {
            if (value.kind !== 'string') throw new Error(':orth must be a string');
            draft.orth = value.text;
        } else if (field === 'features') {
            draft.features = expectList(value, ':features').map((f) => readSpec(f, 'feature'));
        } else if (field === 'subc') {
            draft.subc = expectList(value, ':subc').map((s) => {
                const spec = readSpec(s, 'frame');
                const pval = spec.params.find(([k]) => k === 'pval');
                return { frame: spec.name, pval: pval ? pval[1] : null };
            });
        } else {
            draft.morphology[field] = stringItems(value, `:${field}`);
        }
    }
    return draft;
}

// ---------------------------------------------------------------- printing

function specNode(name: string, params: Array<[string, string[]]>): SNode {
    const items: SNode[] = [atom(name)];
    const ordered = [...params].sort((a, b) => (a[0] < b[0] ? -1 : a[0] > b[0] ? 1 : 0));
    for (const [key, values] of ordered) {
        items.push(atom(`:${key}`));
        items.push(list(...values.map(str)));
    }
    return list(...items);
}

/**
 * Serialize a draft to canonical entry text: head, :orth, morphology keys
 * alphabetically, :features, :subc — single spaces, escaped strings.  The
 * service prints saved entries the same way, so a clean draft's text equals
 * the stored line.
 */
export function draftToText(draft: EntryDraft): string {
    const items: SNode[] = [atom(draft.pos), atom(':orth'), str(draft.orth)];
    for (const key of Object.keys(draft.morphology).sort()) {
        items.push(atom(`:${key}`));
        items.push(list(...draft.morphology[key]!.map(str)));
    }
    if (draft.features.length > 0) {
        items.push(atom(':features'));
        items.push(list(...draft.features.map((f) => specNode(f.name, f.params))));
    }
    if (draft.subc.length > 0) {
        items.push(atom(':subc'));
        items.push(
            list(
                ...draft.subc.map((s) => {
                    // an empty editor means "no prepositions yet": canonical
                    // text never carries an empty :pval list
                    const params: Array<[string, string[]]> =
                        s.pval === null || s.pval.length === 0 ? [] : [['pval', s.pval]];
                    return specNode(s.frame, params);
                }),
            ),
        );
    }
    return printNode(list(...items));
}

// ---------------------------------------------------------------- editing

export function frameIndex(draft: EntryDraft, frame: string): number {
    return draft.subc.findIndex((s) => s.frame === frame);
}

/** Menu toggle: add the frame if absent, drop it if present. */
export function toggleFrame(draft: EntryDraft, frame: FrameInfo): void {
    const at = frameIndex(draft, frame.name);
    if (at >= 0) {
        draft.subc.splice(at, 1);
    } else {
        draft.subc.push({ frame: frame.name, pval: frame.requires_pval ? [] : null });
    }
}

export function addPrep(draft: EntryDraft, frame: string, prep: string): void {
    const spec = draft.subc[frameIndex(draft, frame)];
    if (!spec) throw new Error(`draft has no frame ${frame}`);
    if (spec.pval === null) spec.pval = [];
    const token = prep.trim().toLowerCase();
    if (token && !spec.pval.includes(token)) spec.pval.push(token);
}

export function removePrep(draft: EntryDraft, frame: string, prep: string): void {
    const spec = draft.subc[frameIndex(draft, frame)];
    if (!spec || spec.pval === null) return;
    spec.pval = spec.pval.filter((p) => p !== prep);
}

/** One-click insert of the directional-preposition placeholder. */
export function insertPdir(draft: EntryDraft, frame: string): void {
    addPrep(draft, frame, P_DIR);
}

// ---------------------------------------------------------------- linting

export interface DraftIssue {
    code: 'missing-pos' | 'missing-orth' | 'missing-pval' | 'unknown-frame';
    frame: string | null;
    message: string;
}

/**
 * Instant feedback while editing; the service re-validates on save, so
 * this only needs to catch what the menus can produce.
 */
export function lintDraft(draft: EntryDraft, frames: FrameInfo[]): DraftIssue[] {
    const issues: DraftIssue[] = [];
    if (!draft.pos) {
        issues.push({ code: 'missing-pos', frame: null, message: 'pick a part of speech' });
    }
    if (!draft.orth) {
        issues.push({ code: 'missing-orth', frame: null, message: 'enter the base form' });
    }
    const byName = new Map(frames.map((f) => [f.name, f]));
    for (const spec of draft.subc) {
        const frame = byName.get(spec.frame);
        if (!frame) {
            issues.push({
                code: 'unknown-frame',
                frame: spec.frame,
                message: `no frame named ${spec.frame}`,
            });
            continue;
        }
        if (frame.requires_pval && (spec.pval === null || spec.pval.length === 0)) {
            issues.push({
                code: 'missing-pval',
                frame: spec.frame,
                message: `${spec.frame} needs at least one preposition`,
            });
        }
    }
    return issues;
}
