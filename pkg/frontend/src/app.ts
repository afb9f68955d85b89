// Browser entry point: role picker, request queue, and the two review
// screens. Manual-mode sessions never render or fetch suggestion data;
// the same endpoint simply returns the conversation without it, and the
// UI renders only what arrived.

import { ApiClient, ApiError } from './api.js';
import { wordDiff } from './diff.js';
import { CrmViewState, PmViewState, TITLE_WORD_CAP } from './session.js';
import { PRIORITIES, type Mode, type Priority, type RequestView, type Role } from './types.js';

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get('api') ?? 'http://127.0.0.1:8400');

const root = document.getElementById('app') as HTMLElement;

interface AppState {
  role: Role;
  mode: Mode;
  user: string;
}

const state: AppState = { role: 'crm_expert', mode: 'assisted', user: 'reviewer' };

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Array<Node | string>
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function banner(mode: Mode): HTMLElement {
  return el(
    'div',
    { class: `banner ${mode}` },
    mode === 'assisted' ? 'Assisted review (suggestions shown)' : 'Manual review (no suggestions)',
  );
}

async function showQueue(): Promise<void> {
  const queueState = state.role === 'crm_expert' ? 'pending' : 'pm';
  const items = await api.queue(queueState);
  root.replaceChildren(
    el('h2', {}, state.role === 'crm_expert' ? 'Requests awaiting escalation review' : 'Tickets awaiting finalization'),
    renderControls(),
    el(
      'ul',
      { class: 'queue' },
      ...items.map((item) =>
        el(
          'li',
          {},
          el('button', { 'data-id': item.id }, `${item.id}: ${item.subject}`),
        ),
      ),
    ),
  );
  root.querySelectorAll('button[data-id]').forEach((button) => {
    button.addEventListener('click', () => {
      void openRequest((button as HTMLButtonElement).dataset.id as string);
    });
  });
}

function renderControls(): HTMLElement {
  const roleSelect = el('select', { id: 'role' });
  for (const role of ['crm_expert', 'project_manager'] as Role[]) {
    const option = el('option', { value: role }, role);
    if (role === state.role) option.setAttribute('selected', '');
    roleSelect.append(option);
  }
  roleSelect.addEventListener('change', () => {
    state.role = roleSelect.value as Role;
    void showQueue();
  });
  const modeSelect = el('select', { id: 'mode' });
  for (const mode of ['assisted', 'manual'] as Mode[]) {
    const option = el('option', { value: mode }, mode);
    if (mode === state.mode) option.setAttribute('selected', '');
    modeSelect.append(option);
  }
  modeSelect.addEventListener('change', () => {
    state.mode = modeSelect.value as Mode;
  });
  return el('div', { class: 'controls' }, 'Role: ', roleSelect, ' Mode: ', modeSelect);
}

async function openRequest(requestId: string): Promise<void> {
  const opened = await api.openSession(state.role, requestId, state.mode, state.user);
  const view = await api.requestView(requestId, opened.session_id);
  if (state.role === 'crm_expert') {
    renderCrm(opened.session_id, view);
  } else {
    renderPm(opened.session_id, view);
  }
}

function conversationBlock(view: RequestView): HTMLElement {
  return el(
    'div',
    { class: 'conversation' },
    ...view.conversation.map((utterance) =>
      el('p', { class: utterance.speaker_role }, `[${utterance.speaker_role}] ${utterance.text}`),
    ),
  );
}

function renderCrm(sessionId: string, view: RequestView): void {
  const crm = new CrmViewState(view);
  let interacted = false;
  const markInteraction = () => {
    if (!interacted) {
      interacted = true;
      void api.markInteraction(sessionId);
    }
    crm.tracker.input();
  };

  const checkboxes = crm.sentences.map((sentence, index) => {
    const input = el('input', { type: 'checkbox', 'data-index': String(index) }) as HTMLInputElement;
    input.checked = sentence.checked;
    input.addEventListener('change', () => {
      markInteraction();
      crm.toggleSentence(sentence.origin);
    });
    return el('label', { class: 'sentence' }, input, ` ${sentence.text}`);
  });

  const escalate = el('input', { type: 'checkbox', id: 'escalate' }) as HTMLInputElement;
  escalate.checked = crm.escalate;
  escalate.addEventListener('change', () => {
    markInteraction();
    crm.setEscalate(escalate.checked);
  });

  const status = el('div', { class: 'status' });
  const submit = el('button', {}, 'Submit escalation decision') as HTMLButtonElement;
  submit.addEventListener('click', async () => {
    try {
      const result = await api.submit(sessionId, crm.buildSubmit());
      status.textContent = `Submitted; request is now ${result.request_state}.`;
      submit.disabled = true;
    } catch (error) {
      status.textContent = error instanceof ApiError ? error.detail : `offline; queued (${api.pendingSubmits})`;
    }
  });

  root.replaceChildren(
    el('h2', {}, `${view.request_id}: ${view.subject}`),
    banner(view.mode),
    conversationBlock(view),
    el('h3', {}, 'Summary sentences'),
    el('div', { class: 'sentences' }, ...checkboxes),
    el('p', {}, el('label', {}, escalate, ' escalate to development')),
    submit,
    status,
  );
}

function renderPm(sessionId: string, view: RequestView): void {
  const pm = new PmViewState(view);
  let interacted = false;
  const markInteraction = () => {
    if (!interacted) {
      interacted = true;
      void api.markInteraction(sessionId);
    }
  };

  const title = el('input', { type: 'text', id: 'title', size: '80' }) as HTMLInputElement;
  title.value = pm.title;
  const counter = el('span', { class: 'counter' });
  const content = el('textarea', { rows: '6', cols: '80' }) as HTMLTextAreaElement;
  content.value = pm.content;
  const highlight = el('div', { class: 'highlight' });
  const preview = el('span', { class: 'preview' });
  const status = el('div', { class: 'status' });
  const submit = el('button', {}, 'Create ticket') as HTMLButtonElement;

  const refresh = () => {
    counter.textContent = ` ${pm.titleWordCount()}/${TITLE_WORD_CAP} words`;
    counter.className = pm.canSubmit() ? 'counter' : 'counter over';
    submit.disabled = !pm.canSubmit();
    preview.textContent = view.mode === 'assisted' ? `${pm.previewChangedWords()} words changed vs suggestion` : '';
    highlight.replaceChildren(
      ...wordDiff(view.suggestion?.ticket?.content ?? '', pm.content).map((op) => {
        if (op.type === 'keep') return el('span', {}, `${op.after} `);
        if (op.type === 'del') return el('span', { class: 'removed' }, `${op.before} `);
        if (op.type === 'sub') return el('span', { class: 'changed' }, `${op.after} `);
        return el('span', { class: 'added' }, `${op.after} `);
      }),
    );
  };
  title.addEventListener('input', () => {
    markInteraction();
    pm.setTitle(title.value);
    refresh();
  });
  content.addEventListener('input', () => {
    markInteraction();
    pm.setContent(content.value);
    refresh();
  });

  const priority = el('select', { id: 'priority' }) as HTMLSelectElement;
  for (const level of PRIORITIES) {
    const option = el('option', { value: level }, level);
    if (level === pm.priority) option.setAttribute('selected', '');
    priority.append(option);
  }
  priority.addEventListener('change', () => {
    markInteraction();
    pm.setPriority(priority.value as Priority);
  });

  const assignee = el('input', { type: 'text', id: 'assignee' }) as HTMLInputElement;
  assignee.value = pm.assignee;
  assignee.addEventListener('input', () => {
    markInteraction();
    pm.setAssignee(assignee.value);
  });

  submit.addEventListener('click', async () => {
    try {
      const result = await api.submit(sessionId, pm.buildSubmit());
      const counts = result.edits.map((edit) => `${edit.field}: ${edit.changed_word_count}`).join(', ');
      status.textContent = `Ticket recorded (${counts || 'no edits'}).`;
      submit.disabled = true;
    } catch (error) {
      status.textContent = error instanceof ApiError ? error.detail : `offline; queued (${api.pendingSubmits})`;
    }
  });

  const badges =
    view.mode === 'assisted'
      ? el(
          'p',
          { class: 'badges' },
          `confidence - escalation ${(pm.confidences.escalation * 100).toFixed(0)}%, ` +
            `priority ${(pm.confidences.priority * 100).toFixed(0)}%, ` +
            `assignee ${(pm.confidences.assignment * 100).toFixed(0)}%`,
        )
      : el('p', {});

  const crmSummary = view.crm_summary
    ? el('p', { class: 'crm-summary' }, `Reviewer selected sentences: ${JSON.stringify(view.crm_summary)}`)
    : el('p', {});

  root.replaceChildren(
    el('h2', {}, `${view.request_id}: ${view.subject}`),
    banner(view.mode),
    conversationBlock(view),
    crmSummary,
    badges,
    el('h3', {}, 'Title'),
    el('p', {}, title, counter),
    el('h3', {}, 'Content'),
    content,
    highlight,
    el('p', {}, 'Priority: ', priority, ' Assignee: ', assignee, ' ', preview),
    submit,
    status,
  );
  refresh();
}

void showQueue();
