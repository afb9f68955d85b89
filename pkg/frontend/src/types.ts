// Payload shapes of the review-service JSON API.

export type Role = 'crm_expert' | 'project_manager';
export type Mode = 'manual' | 'assisted';
export type Priority = 'Blocker' | 'Critical' | 'Major' | 'Minor' | 'Trivial';

export const PRIORITIES: Priority[] = ['Blocker', 'Critical', 'Major', 'Minor', 'Trivial'];

export interface QueueItem {
  id: string;
  subject: string;
}

export interface UtterancePayload {
  speaker_role: 'customer' | 'crm_staff';
  text: string;
}

export interface SummarySentence {
  origin: [number, number];
  text: string;
  score: number;
}

export interface SuggestionPayload {
  request_id: string;
  summary: { request_id: string; method: string; sentences: SummarySentence[] } | null;
  escalate: boolean;
  escalation_confidence: number;
  ticket: {
    request_id: string;
    title: string;
    content: string;
    priority: Priority;
    assignee: string;
    source: string;
  } | null;
  priority_confidence: number;
  assignment_confidence: number;
  pipeline_version: string;
  title_fallback: boolean;
  error: { step: string; message: string } | null;
}

export interface RequestView {
  request_id: string;
  subject: string;
  conversation: UtterancePayload[];
  mode: Mode;
  crm_summary?: Array<[number, number]>;
  suggestion?: SuggestionPayload;
}

export interface OpenSessionResponse {
  session_id: string;
  started_at: number;
}

export interface Edit {
  field: 'summary_sentences' | 'title' | 'content' | 'priority' | 'assignee' | 'escalate';
  before: unknown;
  after: unknown;
}

export interface SubmitBody {
  decisions: Record<string, unknown>;
  edits: Edit[];
  client_active_ms: number;
}

export interface SubmitResponse {
  session_id: string;
  duration_seconds: number;
  edits: Array<{ field: string; changed_word_count: number }>;
  request_state: string;
}
