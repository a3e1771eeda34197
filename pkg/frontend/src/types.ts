/**
 * Shapes of the service's HTTP bodies, as documented by the API.
 * The console does no ranking math of its own: every rank shown on
 * screen came out of one of these responses.
 */

export type CpuMode = 'single-core' | 'all-cores';
export type RankMode = 'lightweight' | 'hybrid';
export type HostState =
  | 'pending'
  | 'provisioning'
  | 'benchmarking'
  | 'collecting'
  | 'done'
  | 'failed';

export interface HostStatus {
  state: HostState;
  started_at: string | null;
  finished_at: string | null;
  duration_seconds: number | null;
  failure_reason: string | null;
}

export interface RunBody {
  run_id: string;
  started_at: string | null;
  finished_at: string | null;
  finished: boolean;
  succeeded: boolean;
  dataset_id: string | null;
  hosts: Record<string, HostStatus>;
}

export interface RankEntry {
  vm_id: string;
  value: number | null;
  rank: number;
}

export interface RankTableBody {
  mode: RankMode;
  label: string;
  weights: number[] | null;
  dataset_ids: string[];
  entries: RankEntry[];
}

export interface DatasetEntry {
  dataset_id: string;
  role: string;
  stored_at: string;
  memory_mib: number;
  cpu_mode: CpuMode;
  vm_ids: string[];
}

export interface HostSpec {
  id: string;
  vm_type?: string;
  vcpus?: number;
  memory_gib?: number;
  executor?: string;
}

export interface RunRequest {
  hosts?: HostSpec[];
  inventory?: string;
  memory_mib: number;
  cpu_mode: CpuMode;
  run_id?: string;
}

/** Weights w1..w4, each in [0, 5]; the sliders enforce the bounds. */
export type Weights = [number, number, number, number];

export interface RankingsQuery {
  dataset: string;
  weights: Weights;
  mode: RankMode;
  maxAgeDays: number;
}
