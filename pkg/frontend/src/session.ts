// View-state logic for the two review screens, kept free of DOM code so
// it is unit-testable. The CRM screen is selection-only (checkboxes over
// server-segmented sentences plus an escalate toggle); the PM screen
// edits the ticket draft. Edits are computed client-side for the preview
// but the server's diff is authoritative.

import { changedWordCount, countWords } from './diff.js';
import type { Edit, Mode, Priority, RequestView, SubmitBody } from './types.js';

export const TITLE_WORD_CAP = 11;

export type Clock = () => number;

// client_active_ms accumulates time between focus/input and blur.
export class ActivityTracker {
  private activeSince: number | null = null;
  private accumulatedMs = 0;

  constructor(private clock: Clock = () => Date.now()) {}

  focus(): void {
    if (this.activeSince === null) this.activeSince = this.clock();
  }

  input(): void {
    this.focus();
  }

  blur(): void {
    if (this.activeSince !== null) {
      this.accumulatedMs += this.clock() - this.activeSince;
      this.activeSince = null;
    }
  }

  get activeMs(): number {
    const open = this.activeSince === null ? 0 : this.clock() - this.activeSince;
    return Math.round(this.accumulatedMs + open);
  }
}

function sameIndexLists(a: Array<[number, number]>, b: Array<[number, number]>): boolean {
  if (a.length !== b.length) return false;
  return a.every(([u, s], i) => b[i][0] === u && b[i][1] === s);
}

export interface SentenceRow {
  origin: [number, number];
  text: string;
  checked: boolean;
}

export class CrmViewState {
  readonly mode: Mode;
  readonly sentences: SentenceRow[];
  escalate: boolean;
  private readonly suggestedSelection: Array<[number, number]>;
  private readonly suggestedEscalate: boolean;
  readonly tracker: ActivityTracker;

  constructor(view: RequestView & { sentences?: Array<{ origin: [number, number]; text: string }> }, clock?: Clock) {
    this.mode = view.mode;
    this.tracker = new ActivityTracker(clock);
    const suggested = new Set<string>();
    if (view.mode === 'assisted' && view.suggestion?.summary) {
      for (const sentence of view.suggestion.summary.sentences) {
        suggested.add(sentence.origin.join(','));
      }
    }
    this.sentences = (view.sentences ?? []).map((s) => ({
      origin: [s.origin[0], s.origin[1]],
      text: s.text,
      checked: suggested.has(s.origin.join(',')),
    }));
    this.suggestedEscalate = view.mode === 'assisted' && !!view.suggestion?.escalate;
    this.escalate = this.suggestedEscalate;
    this.suggestedSelection = this.selectedOrigins();
  }

  toggleSentence(origin: [number, number]): void {
    const row = this.sentences.find((s) => s.origin[0] === origin[0] && s.origin[1] === origin[1]);
    if (row) row.checked = !row.checked;
    this.tracker.input();
  }

  setEscalate(value: boolean): void {
    this.escalate = value;
    this.tracker.input();
  }

  selectedOrigins(): Array<[number, number]> {
    return this.sentences.filter((s) => s.checked).map((s) => s.origin);
  }

  buildSubmit(): SubmitBody {
    const selection = this.selectedOrigins();
    const edits: Edit[] = [];
    if (this.mode === 'assisted') {
      if (!sameIndexLists(selection, this.suggestedSelection)) {
        edits.push({
          field: 'summary_sentences',
          before: this.suggestedSelection,
          after: selection,
        });
      }
      if (this.escalate !== this.suggestedEscalate) {
        edits.push({ field: 'escalate', before: this.suggestedEscalate, after: this.escalate });
      }
    }
    return {
      decisions: { escalate: this.escalate, summary_sentences: selection },
      edits,
      client_active_ms: this.tracker.activeMs,
    };
  }
}

export class PmViewState {
  readonly mode: Mode;
  title: string;
  content: string;
  priority: Priority;
  assignee: string;
  readonly confidences: { escalation: number; priority: number; assignment: number };
  private readonly suggested: { title: string; content: string; priority: Priority; assignee: string } | null;
  readonly tracker: ActivityTracker;

  constructor(view: RequestView, clock?: Clock) {
    this.mode = view.mode;
    this.tracker = new ActivityTracker(clock);
    const ticket = view.mode === 'assisted' ? (view.suggestion?.ticket ?? null) : null;
    this.suggested = ticket
      ? {
          title: ticket.title,
          content: ticket.content,
          priority: ticket.priority,
          assignee: ticket.assignee,
        }
      : null;
    this.title = ticket?.title ?? '';
    this.content = ticket?.content ?? '';
    this.priority = ticket?.priority ?? 'Major';
    this.assignee = ticket?.assignee ?? '';
    this.confidences = {
      escalation: view.suggestion?.escalation_confidence ?? 0,
      priority: view.suggestion?.priority_confidence ?? 0,
      assignment: view.suggestion?.assignment_confidence ?? 0,
    };
  }

  setTitle(value: string): void {
    this.title = value;
    this.tracker.input();
  }

  setContent(value: string): void {
    this.content = value;
    this.tracker.input();
  }

  setPriority(value: Priority): void {
    this.priority = value;
    this.tracker.input();
  }

  setAssignee(value: string): void {
    this.assignee = value;
    this.tracker.input();
  }

  titleWordCount(): number {
    return countWords(this.title);
  }

  // submission is blocked while the title exceeds the cap
  canSubmit(): boolean {
    return this.titleWordCount() <= TITLE_WORD_CAP;
  }

  previewChangedWords(): number {
    if (!this.suggested) return 0;
    return (
      changedWordCount(this.suggested.title, this.title) +
      changedWordCount(this.suggested.content, this.content)
    );
  }

  buildSubmit(): SubmitBody {
    if (!this.canSubmit()) {
      throw new Error(`title exceeds the ${TITLE_WORD_CAP}-word cap`);
    }
    const edits: Edit[] = [];
    if (this.suggested) {
      const fields: Array<[Edit['field'], string, string]> = [
        ['title', this.suggested.title, this.title],
        ['content', this.suggested.content, this.content],
        ['priority', this.suggested.priority, this.priority],
        ['assignee', this.suggested.assignee, this.assignee],
      ];
      for (const [field, before, after] of fields) {
        if (before !== after) edits.push({ field, before, after });
      }
    }
    return {
      decisions: {
        title: this.title,
        content: this.content,
        priority: this.priority,
        assignee: this.assignee,
      },
      edits,
      client_active_ms: this.tracker.activeMs,
    };
  }
}
