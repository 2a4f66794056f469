/** Wire types for the /v1/* API. */

export interface AnnotationRecord {
  annotator: string;
  score: number;
  labels: string[];
  timestamp: string | null;
}

export type EntryStatus = "OK" | "DISPUTED" | "PROVISIONAL";

export interface EntryRecord {
  id: string;
  pattern: string;
  language: string;
  translation: string | null;
  kind: "PHRASE" | "COMBO";
  status: EntryStatus;
  consensus: number | "DISPUTED" | null;
  labels: string[];
  annotations: AnnotationRecord[];
}

export interface LexiconResponse {
  version: number;
  entries: EntryRecord[];
}

export interface ExplanationRecord {
  entry_id: string;
  spans: Array<[number, number]>;
  score: number;
  labels: string[];
}

export interface ScoreRecord {
  toxicity: number;
  antisemitic: boolean;
  violent: boolean;
  explanations: ExplanationRecord[];
  lexicon_version: number;
}

export interface AnnotationRequest {
  annotator: string;
  score: number;
  labels: string[];
  /** Expected lexicon version; the server answers 409 when stale. */
  version?: number;
}

export interface AnnotationResponse {
  version: number;
  entry: EntryRecord;
}

export interface HealthResponse {
  version: number;
  entries: number;
  compiled_entries: number;
}
