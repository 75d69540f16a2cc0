// The lexicographer's screen: a concordance pane and a menu-based entry
// editor side by side.  All reads and writes go through the service; the
// workbench holds only screen state.

import {
    ApiClient,
    DiagnosticInfo,
    EntryHit,
    FrameInfo,
    InstanceInfo,
    KwicLineInfo,
    ServiceUnavailableError,
    ValidationFailedError,
    VersionConflictError,
} from './api.js';
import { compareEntryTexts, FrameDiffRow } from './compare.js';
import {
    EntryDraft,
    POS_CHOICES,
    addPrep,
    draftFromText,
    draftToText,
    emptyDraft,
    frameIndex,
    insertPdir,
    lintDraft,
    removePrep,
    toggleFrame,
} from './draft.js';

export type Flag = 'difficult' | 'ambiguous' | 'figurative';
export const FLAG_CYCLE: ReadonlyArray<Flag | null> = [
    null,
    'difficult',
    'ambiguous',
    'figurative',
];

export interface CitationView {
    id: string;
    line: KwicLineInfo;
    flag: Flag | null;
    note: string;
    /** Frame the citation was tagged with when flagged (instances need one). */
    taggedFrame: string | null;
    /** Already present in the instance store (flag round-tripped). */
    saved: boolean;
}

export interface Conflict {
    currentVersion: number;
    serverText: string | null;
}

export interface WorkbenchState {
    orth: string;
    entries: EntryHit[];
    frames: FrameInfo[];
    citations: CitationView[];
    draft: EntryDraft;
    diagnostics: DiagnosticInfo[];
    conflict: Conflict | null;
    banner: string | null;
    frameCursor: number;
    citationCursor: number;
    compareWith: string | null;
    compareRows: FrameDiffRow[];
    lexicon: string;
    annotator: string;
}

export interface WorkbenchOptions {
    lexicon?: string;
    annotator?: string;
    instancesName?: string;
    kwicWindow?: number;
    kwicLimit?: number;
}

/** Surface forms worth probing the concordance for; unknown forms just miss. */
export function candidateForms(orth: string): string[] {
    const forms = [orth, `${orth}s`, `${orth}es`, `${orth}ed`, `${orth}d`, `${orth}ing`];
    if (orth.endsWith('e')) forms.push(`${orth.slice(0, -1)}ing`);
    if (orth.endsWith('y')) forms.push(`${orth.slice(0, -1)}ies`, `${orth.slice(0, -1)}ied`);
    return [...new Set(forms.filter((f) => f.length > 1))];
}

function citationId(orth: string, line: KwicLineInfo): string {
    return `${orth}:${line.doc_id}:${line.span[0]}`;
}

export class Workbench {
    readonly state: WorkbenchState;
    private readonly instancesName: string;
    private readonly kwicWindow: number;
    private readonly kwicLimit: number;

    constructor(
        readonly api: ApiClient,
        readonly root: HTMLElement,
        options: WorkbenchOptions = {},
    ) {
        this.instancesName = options.instancesName ?? 'instances';
        this.kwicWindow = options.kwicWindow ?? 40;
        this.kwicLimit = options.kwicLimit ?? 25;
        this.state = {
            orth: '',
            entries: [],
            frames: [],
            citations: [],
            draft: emptyDraft(),
            diagnostics: [],
            conflict: null,
            banner: null,
            frameCursor: 0,
            citationCursor: 0,
            compareWith: null,
            compareRows: [],
            lexicon: options.lexicon ?? 'work',
            annotator: options.annotator ?? '',
        };
        this.root.addEventListener('keydown', (event) => this.handleKey(event as KeyboardEvent));
        this.render();
    }

    // ------------------------------------------------------------ loading

    async loadWord(orth: string): Promise<void> {
        const word = orth.trim().toLowerCase();
        if (!word) return;
        this.state.orth = word;
        this.state.conflict = null;
        this.state.diagnostics = [];
        this.state.compareWith = null;
        this.state.compareRows = [];
        try {
            if (this.state.frames.length === 0) {
                this.state.frames = await this.api.getFrames();
            }
            const [entries, lines, saved] = await Promise.all([
                this.api.getEntries(word),
                this.api.getKwic(candidateForms(word), this.kwicWindow, this.kwicLimit),
                this.api.getInstances(this.instancesName, { lemma: word }),
            ]);
            this.state.entries = entries;
            this.state.citations = lines.map((line) => ({
                id: citationId(word, line),
                line,
                flag: null,
                note: '',
                taggedFrame: null,
                saved: false,
            }));
            this.applySavedInstances(saved);
            this.state.draft = emptyDraft(word);
            this.state.frameCursor = 0;
            this.state.citationCursor = 0;
            this.state.banner = null;
        } catch (err) {
            if (err instanceof ServiceUnavailableError) {
                this.state.banner = `service unreachable — check the server and retry`;
            } else {
                this.state.banner = `load failed: ${(err as Error).message}`;
            }
        }
        this.render();
    }

    private applySavedInstances(saved: InstanceInfo[]): void {
        const byId = new Map(saved.map((inst) => [inst.id, inst]));
        for (const citation of this.state.citations) {
            const inst = byId.get(citation.id);
            if (inst) {
                citation.flag = (inst.flag as Flag | null) ?? null;
                citation.taggedFrame = inst.frame;
                citation.saved = true;
            }
        }
    }

    openHit(hit: EntryHit): void {
        this.state.draft = draftFromText(hit.text, hit.version);
        this.state.conflict = null;
        this.state.diagnostics = [];
        this.state.banner = null;
        this.render();
    }

    newDraft(pos: string): void {
        this.state.draft = emptyDraft(this.state.orth, pos);
        this.state.conflict = null;
        this.state.diagnostics = [];
        this.render();
    }

    // ------------------------------------------------------------ editing

    /** Frames for the menu: grouped by kind, alphabetical inside a group. */
    frameMenu(): FrameInfo[] {
        return [...this.state.frames].sort((a, b) =>
            a.kind === b.kind
                ? a.name < b.name
                    ? -1
                    : a.name > b.name
                      ? 1
                      : 0
                : a.kind < b.kind
                  ? -1
                  : 1,
        );
    }

    moveFrameCursor(delta: number): void {
        const menu = this.frameMenu();
        if (menu.length === 0) return;
        const next = Math.min(menu.length - 1, Math.max(0, this.state.frameCursor + delta));
        this.state.frameCursor = next;
        this.render();
    }

    frameAtCursor(): FrameInfo | null {
        return this.frameMenu()[this.state.frameCursor] ?? null;
    }

    toggleFrameAtCursor(): void {
        const frame = this.frameAtCursor();
        if (!frame) return;
        toggleFrame(this.state.draft, frame);
        this.render();
    }

    insertPdirAtCursor(): void {
        const frame = this.frameAtCursor();
        if (!frame || frameIndex(this.state.draft, frame.name) < 0) return;
        insertPdir(this.state.draft, frame.name);
        this.render();
    }

    addPrepTo(frame: string, prep: string): void {
        addPrep(this.state.draft, frame, prep);
        this.render();
    }

    removePrepFrom(frame: string, prep: string): void {
        removePrep(this.state.draft, frame, prep);
        this.render();
    }

    // ------------------------------------------------------------ saving

    async save(): Promise<void> {
        const issues = lintDraft(this.state.draft, this.state.frames);
        const blocking = issues.filter((i) => i.code === 'missing-pos' || i.code === 'missing-orth');
        if (blocking.length > 0) {
            this.state.banner = blocking[0]!.message;
            this.render();
            return;
        }
        const text = draftToText(this.state.draft);
        try {
            const result = await this.api.saveEntry({
                lexicon: this.state.lexicon,
                text,
                expectedVersion: this.state.draft.baseVersion,
                annotator: this.state.annotator,
            });
            this.state.draft.baseVersion = result.version;
            this.state.diagnostics = result.warnings;
            this.state.conflict = null;
            this.state.banner = `saved ${result.orth}/${result.pos} v${result.version}`;
            this.state.entries = await this.api.getEntries(this.state.orth || result.orth);
        } catch (err) {
            if (err instanceof VersionConflictError) {
                this.state.conflict = {
                    currentVersion: err.currentVersion,
                    serverText: err.serverText,
                };
                this.state.banner = null;
            } else if (err instanceof ValidationFailedError) {
                this.state.diagnostics = err.diagnostics;
                this.state.banner = null;
            } else if (err instanceof ServiceUnavailableError) {
                this.state.banner = 'service unreachable — entry not saved, retry when back';
            } else {
                this.state.banner = `save failed: ${(err as Error).message}`;
            }
        }
        this.render();
    }

    /** Merge choice: discard the draft and edit from the server's version. */
    resolveConflictKeepServer(): void {
        const conflict = this.state.conflict;
        if (!conflict) return;
        if (conflict.serverText) {
            this.state.draft = draftFromText(conflict.serverText, conflict.currentVersion);
        } else {
            this.state.draft.baseVersion = conflict.currentVersion;
        }
        this.state.conflict = null;
        this.render();
    }

    /** Merge choice: keep the draft and retarget it at the server version. */
    async resolveConflictOverwrite(): Promise<void> {
        const conflict = this.state.conflict;
        if (!conflict) return;
        this.state.draft.baseVersion = conflict.currentVersion;
        this.state.conflict = null;
        await this.save();
    }

    // ------------------------------------------------------------ citations

    moveCitationCursor(delta: number): void {
        const count = this.state.citations.length;
        if (count === 0) return;
        this.state.citationCursor = Math.min(
            count - 1,
            Math.max(0, this.state.citationCursor + delta),
        );
        this.render();
    }

    cycleFlagAtCursor(): void {
        const citation = this.state.citations[this.state.citationCursor];
        if (!citation) return;
        const at = FLAG_CYCLE.indexOf(citation.flag);
        citation.flag = FLAG_CYCLE[(at + 1) % FLAG_CYCLE.length] ?? null;
        citation.saved = false;
        if (citation.flag && !citation.taggedFrame) {
            citation.taggedFrame =
                this.frameAtCursor()?.name ?? this.state.draft.subc[0]?.frame ?? null;
        }
        this.render();
    }

    setNote(index: number, note: string): void {
        const citation = this.state.citations[index];
        if (citation) citation.note = note;
    }

    /** Push flagged citations into the instance store, then re-read them. */
    async saveFlags(): Promise<void> {
        const pending = this.state.citations.filter((c) => c.flag && !c.saved);
        if (pending.length === 0) {
            this.state.banner = 'no new flags to save';
            this.render();
            return;
        }
        const missingFrame = pending.find((c) => !c.taggedFrame);
        if (missingFrame) {
            this.state.banner = 'tag a frame before saving flags (select one in the menu)';
            this.render();
            return;
        }
        const pos = this.state.draft.pos || 'verb';
        const instances: InstanceInfo[] = pending.map((c) => ({
            id: c.id,
            lemma: this.state.orth,
            pos,
            frame: c.taggedFrame!,
            preps: [],
            labels: [],
            flag: c.flag,
            annotator: this.state.annotator,
            sentence: c.line.left + c.line.match + c.line.right,
        }));
        try {
            await this.api.appendInstances(this.instancesName, instances);
            const saved = await this.api.getInstances(this.instancesName, {
                lemma: this.state.orth,
            });
            this.applySavedInstances(saved);
            this.state.banner = `saved ${instances.length} flag(s)`;
        } catch (err) {
            this.state.banner = `flag save failed: ${(err as Error).message}`;
        }
        this.render();
    }

    // ------------------------------------------------------------ compare

    openCompare(other: string): void {
        const mine = this.state.entries.find(
            (e) => e.lexicon === this.state.lexicon && e.pos === (this.state.draft.pos || e.pos),
        );
        const theirs = this.state.entries.find(
            (e) => e.lexicon === other && e.pos === (mine?.pos ?? this.state.draft.pos),
        );
        this.state.compareWith = other;
        this.state.compareRows = compareEntryTexts(mine?.text ?? null, theirs?.text ?? null);
        this.render();
    }

    closeCompare(): void {
        this.state.compareWith = null;
        this.state.compareRows = [];
        this.render();
    }

    // ------------------------------------------------------------ keyboard

    handleKey(event: Pick<KeyboardEvent, 'key' | 'target' | 'preventDefault'>): void {
        const target = event.target as HTMLElement | null;
        const tag = target?.tagName?.toLowerCase();
        if (tag === 'input' || tag === 'textarea' || tag === 'select') return;
        switch (event.key) {
            case 'ArrowDown':
                event.preventDefault();
                this.moveFrameCursor(1);
                break;
            case 'ArrowUp':
                event.preventDefault();
                this.moveFrameCursor(-1);
                break;
            case 'Enter':
            case ' ':
                event.preventDefault();
                this.toggleFrameAtCursor();
                break;
            case 'p':
                this.insertPdirAtCursor();
                break;
            case 'j':
                this.moveCitationCursor(1);
                break;
            case 'k':
                this.moveCitationCursor(-1);
                break;
            case 'f':
                this.cycleFlagAtCursor();
                break;
            case 's':
                void this.save();
                break;
        }
    }

    // ------------------------------------------------------------ rendering

    render(): void {
        const doc = this.root.ownerDocument;
        this.root.textContent = '';
        this.root.classList.add('wb');

        this.root.append(this.renderHeader(doc));
        const panes = doc.createElement('main');
        panes.className = 'wb-panes';
        panes.append(this.renderConcordance(doc), this.renderEditor(doc));
        this.root.append(panes);
    }

    private renderHeader(doc: Document): HTMLElement {
        const header = doc.createElement('header');
        header.className = 'wb-top';

        const search = doc.createElement('input');
        search.className = 'wb-search';
        search.placeholder = 'headword';
        search.value = this.state.orth;
        search.addEventListener('keydown', (event) => {
            if ((event as KeyboardEvent).key === 'Enter') void this.loadWord(search.value);
        });

        const load = doc.createElement('button');
        load.className = 'wb-load';
        load.textContent = 'load';
        load.addEventListener('click', () => void this.loadWord(search.value));

        const lexicon = doc.createElement('input');
        lexicon.className = 'wb-lexicon';
        lexicon.value = this.state.lexicon;
        lexicon.title = 'lexicon saves go to';
        lexicon.addEventListener('change', () => {
            this.state.lexicon = lexicon.value.trim();
        });

        const annotator = doc.createElement('input');
        annotator.className = 'wb-annotator';
        annotator.value = this.state.annotator;
        annotator.placeholder = 'annotator';
        annotator.addEventListener('change', () => {
            this.state.annotator = annotator.value.trim();
        });

        header.append(search, load, lexicon, annotator);

        if (this.state.banner) {
            const banner = doc.createElement('div');
            banner.className = 'wb-banner';
            banner.textContent = this.state.banner;
            const retry = doc.createElement('button');
            retry.className = 'wb-retry';
            retry.textContent = 'retry';
            retry.addEventListener('click', () => void this.loadWord(this.state.orth));
            banner.append(' ', retry);
            header.append(banner);
        }
        return header;
    }

    private renderConcordance(doc: Document): HTMLElement {
        const pane = doc.createElement('section');
        pane.className = 'wb-concordance';
        const heading = doc.createElement('h2');
        heading.textContent = `citations (${this.state.citations.length})`;
        pane.append(heading);

        const rows = doc.createElement('ol');
        this.state.citations.forEach((citation, index) => {
            const row = doc.createElement('li');
            row.className = 'wb-citation';
            if (index === this.state.citationCursor) row.classList.add('wb-cursor');
            if (citation.flag) row.classList.add(`wb-flag-${citation.flag}`);

            const text = doc.createElement('span');
            text.className = 'wb-kwic';
            const left = doc.createElement('span');
            left.textContent = citation.line.left;
            const match = doc.createElement('mark');
            match.textContent = citation.line.match;
            const right = doc.createElement('span');
            right.textContent = citation.line.right;
            text.append(left, match, right);

            const flag = doc.createElement('button');
            flag.className = 'wb-flag';
            flag.textContent = citation.flag ? `flag: ${citation.flag}` : 'flag';
            flag.addEventListener('click', () => {
                this.state.citationCursor = index;
                this.cycleFlagAtCursor();
            });

            const note = doc.createElement('input');
            note.className = 'wb-note';
            note.placeholder = 'note';
            note.value = citation.note;
            note.addEventListener('change', () => this.setNote(index, note.value));

            row.append(text, flag, note);
            if (citation.saved) {
                const saved = doc.createElement('span');
                saved.className = 'wb-saved';
                saved.textContent = 'saved';
                row.append(saved);
            }
            rows.append(row);
        });
        pane.append(rows);

        const saveFlags = doc.createElement('button');
        saveFlags.className = 'wb-save-flags';
        saveFlags.textContent = 'save flags';
        saveFlags.addEventListener('click', () => void this.saveFlags());
        pane.append(saveFlags);
        return pane;
    }

    private renderEditor(doc: Document): HTMLElement {
        const pane = doc.createElement('section');
        pane.className = 'wb-editor';

        pane.append(this.renderExisting(doc));
        pane.append(this.renderPosPicker(doc));
        pane.append(this.renderFrameMenu(doc));

        const preview = doc.createElement('pre');
        preview.className = 'wb-preview';
        preview.textContent = this.state.draft.pos ? draftToText(this.state.draft) : '';
        pane.append(preview);

        const save = doc.createElement('button');
        save.className = 'wb-save';
        save.textContent = this.state.draft.baseVersion
            ? `save (v${this.state.draft.baseVersion} + 1)`
            : 'save new entry';
        save.addEventListener('click', () => void this.save());
        pane.append(save);

        if (this.state.diagnostics.length > 0) {
            const diags = doc.createElement('ul');
            diags.className = 'wb-diagnostics';
            for (const diag of this.state.diagnostics) {
                const item = doc.createElement('li');
                item.className = `wb-diag-${diag.severity}`;
                item.textContent = `[${diag.code}] ${diag.message}`;
                diags.append(item);
            }
            pane.append(diags);
        }

        if (this.state.conflict) pane.append(this.renderMerge(doc, this.state.conflict));
        pane.append(this.renderCompare(doc));
        return pane;
    }

    private renderExisting(doc: Document): HTMLElement {
        const box = doc.createElement('div');
        box.className = 'wb-entries';
        for (const hit of this.state.entries) {
            const row = doc.createElement('div');
            row.className = 'wb-entry';
            const label = doc.createElement('code');
            label.textContent = `${hit.lexicon} v${hit.version}: ${hit.text}`;
            const open = doc.createElement('button');
            open.className = 'wb-open';
            open.textContent = 'open';
            open.addEventListener('click', () => this.openHit(hit));
            row.append(label, open);
            box.append(row);
        }
        return box;
    }

    private renderPosPicker(doc: Document): HTMLElement {
        const picker = doc.createElement('select');
        picker.className = 'wb-pos';
        const blank = doc.createElement('option');
        blank.value = '';
        blank.textContent = 'part of speech…';
        picker.append(blank);
        for (const pos of POS_CHOICES) {
            const option = doc.createElement('option');
            option.value = pos;
            option.textContent = pos;
            option.selected = this.state.draft.pos === pos;
            picker.append(option);
        }
        picker.value = this.state.draft.pos;
        picker.addEventListener('change', () => {
            this.state.draft.pos = picker.value;
            this.render();
        });
        return picker;
    }

    private renderFrameMenu(doc: Document): HTMLElement {
        const menu = doc.createElement('div');
        menu.className = 'wb-frames';
        const issues = lintDraft(this.state.draft, this.state.frames);
        let lastKind = '';
        this.frameMenu().forEach((frame, index) => {
            if (frame.kind !== lastKind) {
                lastKind = frame.kind;
                const kind = doc.createElement('h3');
                kind.className = 'wb-kind';
                kind.textContent = frame.kind;
                menu.append(kind);
            }
            const at = frameIndex(this.state.draft, frame.name);
            const row = doc.createElement('div');
            row.className = 'wb-frame';
            row.dataset.frame = frame.name;
            if (index === this.state.frameCursor) row.classList.add('wb-cursor');
            if (at >= 0) row.classList.add('wb-drafted');

            const pick = doc.createElement('input');
            pick.type = 'checkbox';
            pick.checked = at >= 0;
            pick.addEventListener('change', () => {
                this.state.frameCursor = index;
                toggleFrame(this.state.draft, frame);
                this.render();
            });

            const name = doc.createElement('span');
            name.className = 'wb-frame-name';
            name.textContent = frame.name;

            const example = doc.createElement('span');
            example.className = 'wb-frame-ex';
            example.textContent = frame.example ?? '';

            row.append(pick, name, example);

            if (at >= 0 && (frame.requires_pval || this.state.draft.subc[at]!.pval !== null)) {
                row.append(this.renderPvalEditor(doc, frame.name));
            }
            const issue = issues.find((i) => i.frame === frame.name);
            if (issue) {
                const note = doc.createElement('span');
                note.className = `wb-issue wb-issue-${issue.code}`;
                note.textContent = issue.message;
                row.append(note);
            }
            menu.append(row);
        });
        return menu;
    }

    private renderPvalEditor(doc: Document, frame: string): HTMLElement {
        const editor = doc.createElement('span');
        editor.className = 'wb-pval';
        const spec = this.state.draft.subc[frameIndex(this.state.draft, frame)]!;
        for (const prep of spec.pval ?? []) {
            const token = doc.createElement('button');
            token.className = 'wb-prep';
            token.textContent = `${prep} ×`;
            token.title = 'remove';
            token.addEventListener('click', () => this.removePrepFrom(frame, prep));
            editor.append(token);
        }
        const input = doc.createElement('input');
        input.className = 'wb-prep-input';
        input.placeholder = 'add preposition';
        input.addEventListener('keydown', (event) => {
            if ((event as KeyboardEvent).key === 'Enter' && input.value.trim()) {
                this.addPrepTo(frame, input.value);
            }
        });
        const pdir = doc.createElement('button');
        pdir.className = 'wb-pdir';
        pdir.textContent = '+ p-dir';
        pdir.title = 'insert the directional-preposition class';
        pdir.addEventListener('click', () => {
            this.addPrepTo(frame, 'p-dir');
        });
        editor.append(input, pdir);
        return editor;
    }

    private renderMerge(doc: Document, conflict: Conflict): HTMLElement {
        const merge = doc.createElement('div');
        merge.className = 'wb-merge';
        const title = doc.createElement('h3');
        title.textContent = `someone saved v${conflict.currentVersion} while you edited`;
        const server = doc.createElement('pre');
        server.className = 'wb-merge-server';
        server.textContent = conflict.serverText ?? '(entry deleted on server)';
        const mine = doc.createElement('pre');
        mine.className = 'wb-merge-mine';
        mine.textContent = draftToText(this.state.draft);
        const keep = doc.createElement('button');
        keep.className = 'wb-merge-keep-server';
        keep.textContent = 'take server version';
        keep.addEventListener('click', () => this.resolveConflictKeepServer());
        const overwrite = doc.createElement('button');
        overwrite.className = 'wb-merge-overwrite';
        overwrite.textContent = 'save mine over it';
        overwrite.addEventListener('click', () => void this.resolveConflictOverwrite());
        merge.append(title, server, mine, keep, overwrite);
        return merge;
    }

    private renderCompare(doc: Document): HTMLElement {
        const box = doc.createElement('div');
        box.className = 'wb-compare';

        const others = [...new Set(this.state.entries.map((e) => e.lexicon))].filter(
            (name) => name !== this.state.lexicon,
        );
        for (const other of others) {
            const button = doc.createElement('button');
            button.className = 'wb-compare-open';
            button.textContent = `compare with ${other}`;
            button.addEventListener('click', () => this.openCompare(other));
            box.append(button);
        }

        if (this.state.compareWith) {
            const title = doc.createElement('h3');
            title.textContent = `${this.state.lexicon} vs ${this.state.compareWith}`;
            box.append(title);
            const table = doc.createElement('table');
            table.className = 'wb-diff';
            for (const row of this.state.compareRows) {
                const tr = doc.createElement('tr');
                tr.className = `wb-diff-${row.status}`;
                const frame = doc.createElement('td');
                frame.textContent = row.frame;
                const a = doc.createElement('td');
                a.textContent = row.pvalA ? `(${row.pvalA.join(' ')})` : '';
                const b = doc.createElement('td');
                b.textContent = row.pvalB ? `(${row.pvalB.join(' ')})` : '';
                tr.append(frame, a, b);
                table.append(tr);
            }
            box.append(table);
            const close = doc.createElement('button');
            close.className = 'wb-compare-close';
            close.textContent = 'close compare';
            close.addEventListener('click', () => this.closeCompare());
            box.append(close);
        }
        return box;
    }
}
