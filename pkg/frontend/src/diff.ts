// Word-level diff for edit previews and change highlighting.
//
// The changed-word count is the Levenshtein distance over word tokens
// (substitutions + insertions + deletions), the same algorithm the
// service applies server-side; the server's count stays authoritative,
// the preview just has to agree with it.

export interface DiffOp {
  type: 'keep' | 'sub' | 'ins' | 'del';
  before?: string;
  after?: string;
}

function tokenize(value: unknown): string[] {
  if (value === null || value === undefined) return [];
  if (Array.isArray(value)) return value.map((item) => JSON.stringify(item));
  return String(value).split(/\s+/).filter((w) => w.length > 0);
}

export function wordDiff(before: unknown, after: unknown): DiffOp[] {
  const a = tokenize(before);
  const b = tokenize(after);
  const rows = a.length + 1;
  const cols = b.length + 1;
  const cost = new Array<number[]>(rows);
  for (let i = 0; i < rows; i++) {
    cost[i] = new Array<number>(cols);
    cost[i][0] = i;
  }
  for (let j = 0; j < cols; j++) cost[0][j] = j;
  for (let i = 1; i < rows; i++) {
    for (let j = 1; j < cols; j++) {
      const sub = cost[i - 1][j - 1] + (a[i - 1] === b[j - 1] ? 0 : 1);
      cost[i][j] = Math.min(cost[i - 1][j] + 1, cost[i][j - 1] + 1, sub);
    }
  }
  // backtrace, preferring keep/sub so runs of equal words stay aligned
  const ops: DiffOp[] = [];
  let i = a.length;
  let j = b.length;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && cost[i][j] === cost[i - 1][j - 1] + (a[i - 1] === b[j - 1] ? 0 : 1)) {
      ops.push(
        a[i - 1] === b[j - 1]
          ? { type: 'keep', before: a[i - 1], after: b[j - 1] }
          : { type: 'sub', before: a[i - 1], after: b[j - 1] },
      );
      i--;
      j--;
    } else if (i > 0 && cost[i][j] === cost[i - 1][j] + 1) {
      ops.push({ type: 'del', before: a[i - 1] });
      i--;
    } else {
      ops.push({ type: 'ins', after: b[j - 1] });
      j--;
    }
  }
  ops.reverse();
  return ops;
}

export function changedWordCount(before: unknown, after: unknown): number {
  return wordDiff(before, after).filter((op) => op.type !== 'keep').length;
}

export function countWords(text: string): number {
  return text.split(/\s+/).filter((w) => w.length > 0).length;
}
