/** Iteration history strip.
 *
 * The API reports one digest per training iteration; the strip accumulates
 * the iterations this client has seen (each retrain response, plus the
 * current iteration on load) and marks where the validity digest changed —
 * the visible cue that a teaching action actually altered the rules.
 */

export interface IterationEntry {
  iteration: number;
  validity_digest: string;
}

export interface StripEntry extends IterationEntry {
  /** Digest differs from the previous iteration's (first entry: true —
   * it introduced the digest). */
  digestChanged: boolean;
}

/** Record an iteration, deduplicating by number (a refetch of the same
 * iteration replaces rather than duplicates).  Returns a new sorted list. */
export function recordIteration(
  entries: IterationEntry[],
  entry: IterationEntry,
): IterationEntry[] {
  const merged = entries.filter((e) => e.iteration !== entry.iteration);
  merged.push({ ...entry });
  merged.sort((a, b) => a.iteration - b.iteration);
  return merged;
}

export function historyStrip(entries: IterationEntry[]): StripEntry[] {
  const sorted = [...entries].sort((a, b) => a.iteration - b.iteration);
  return sorted.map((entry, i) => ({
    ...entry,
    digestChanged:
      i === 0 || entry.validity_digest !== sorted[i - 1]?.validity_digest,
  }));
}
