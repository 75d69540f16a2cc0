// Reader and printer for the parenthesized entry notation, limited to the
// canonical subset the service emits: lists, double-quoted strings with
// backslash escapes, and bare atoms.  The service owns full validation;
// this exists so the editor can open existing entries and diff drafts.

export type SNode =
    | { kind: 'list'; items: SNode[] }
    | { kind: 'string'; text: string }
    | { kind: 'atom'; text: string };

export class SexprSyntaxError extends Error {
    constructor(message: string, readonly offset: number) {
        super(`${message} (at ${offset})`);
        this.name = 'SexprSyntaxError';
    }
}

const ATOM_END = new Set(['(', ')', '"', ' ', '\t', '\r', '\n', ';']);

class Reader {
    pos = 0;
    constructor(readonly text: string) {}

    eof(): boolean {
        return this.pos >= this.text.length;
    }

    peek(): string {
        return this.text[this.pos] ?? '';
    }

    skipBlank(): void {
        while (!this.eof()) {
            const ch = this.peek();
            if (ch === ';') {
                while (!this.eof() && this.peek() !== '\n') this.pos++;
            } else if (ch === ' ' || ch === '\t' || ch === '\r' || ch === '\n') {
                this.pos++;
            } else {
                return;
            }
        }
    }

    readNode(): SNode {
        const ch = this.peek();
        if (ch === '(') return this.readList();
        if (ch === '"') return this.readString();
        if (ch === ')') throw new SexprSyntaxError("unbalanced ')'", this.pos);
        return this.readAtom();
    }

    readList(): SNode {
        const open = this.pos;
        this.pos++; // consume '('
        const items: SNode[] = [];
        for (;;) {
            this.skipBlank();
            if (this.eof()) throw new SexprSyntaxError("missing ')'", open);
            if (this.peek() === ')') {
                this.pos++;
                return { kind: 'list', items };
            }
            items.push(this.readNode());
        }
    }

    readString(): SNode {
        const open = this.pos;
        this.pos++; // consume opening quote
        let out = '';
        for (;;) {
            if (this.eof()) throw new SexprSyntaxError('unterminated string', open);
            const ch = this.text[this.pos++];
            if (ch === '"') return { kind: 'string', text: out };
            if (ch === '\\') {
                if (this.eof()) throw new SexprSyntaxError('unterminated string', open);
                out += this.text[this.pos++];
            } else {
                out += ch;
            }
        }
    }

    readAtom(): SNode {
        const start = this.pos;
        while (!this.eof() && !ATOM_END.has(this.peek())) this.pos++;
        if (this.pos === start) throw new SexprSyntaxError('empty atom', start);
        // atoms are case-insensitive in the notation; fold like the service
        return { kind: 'atom', text: this.text.slice(start, this.pos).toLowerCase() };
    }
}

export function parseForms(text: string): SNode[] {
    const reader = new Reader(text);
    const forms: SNode[] = [];
    for (;;) {
        reader.skipBlank();
        if (reader.eof()) return forms;
        forms.push(reader.readNode());
    }
}

export function parseOne(text: string): SNode {
    const forms = parseForms(text);
    if (forms.length !== 1) {
        throw new SexprSyntaxError(`expected one form, got ${forms.length}`, 0);
    }
    return forms[0]!;
}

function escapeString(text: string): string {
    return text.replace(/\\/g, '\\\\').replace(/"/g, '\\"');
}

export function printNode(node: SNode): string {
    switch (node.kind) {
        case 'list':
            return `(${node.items.map(printNode).join(' ')})`;
        case 'string':
            return `"${escapeString(node.text)}"`;
        case 'atom':
            return node.text;
    }
}

export function atom(text: string): SNode {
    return { kind: 'atom', text };
}

export function str(text: string): SNode {
    return { kind: 'string', text };
}

export function list(...items: SNode[]): SNode {
    return { kind: 'list', items };
}
