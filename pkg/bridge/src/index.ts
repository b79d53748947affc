/**
 * Node/TypeScript client for the attribution-compactness scorer.
 *
 * Arrays are handed to the scorer through its public interfaces only: the
 * 2D grid is written to an NPY v1 file and the `mstc` CLI returns the
 * report as JSON on stdout. Caller buffers are never mutated. Errors keep
 * the scorer's stable code (`NonFiniteValue`, `TooFewNodes`, ...) on both
 * `code` and `name`.
 */

import { execFile } from "node:child_process";
import { mkdtemp, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { Matrix, toMatrix, writeNpy } from "./npy";

export { Matrix, readNpy, toMatrix, writeNpy } from "./npy";

/** Mirror of the scorer's MetricConfig: identical field names and defaults. */
export interface BridgeConfig {
  k?: number;
  percentile?: number;
  scale_mode?: "diag" | "diag_x100" | "none";
  on_disconnect?: "error" | "escalate_k";
}

export const DEFAULT_CONFIG: Required<BridgeConfig> = {
  k: 500,
  percentile: 80,
  scale_mode: "diag_x100",
  on_disconnect: "escalate_k",
};

/** Flat report as produced by the scorer; field names match the CLI JSON. */
export interface CompactnessReport {
  height: number;
  width: number;
  n_nodes: number;
  mst_length: number;
  hull_area: number;
  hull_degenerate: boolean;
  q_spread: number;
  q_cohesion: number;
  mstc_raw: number;
  mstc_scaled: number;
  scale_constant: number;
  components_before: number;
  k_effective: number;
  k: number;
  percentile: number;
  scale_mode: string;
  on_disconnect: string;
}

export interface BridgeOptions {
  /**
   * Scorer command, split on whitespace; defaults to $MSTC_CLI or "mstc".
   * Use e.g. "python3 -m mstc.cli" to target a specific interpreter.
   */
  command?: string;
  /** Subprocess timeout in milliseconds (default 120000). */
  timeoutMs?: number;
}

/** Error raised by the scorer, carrying its stable error code. */
export class ScoringError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.code = code;
    this.name = code;
  }
}

function scorerCommand(options?: BridgeOptions): string[] {
  const raw = options?.command ?? process.env.MSTC_CLI ?? "mstc";
  const parts = raw.split(/\s+/).filter((p) => p.length > 0);
  if (parts.length === 0) throw new RangeError("empty scorer command");
  return parts;
}

function runScorer(
  args: string[],
  options?: BridgeOptions,
): Promise<{ stdout: string; stderr: string }> {
  const [cmd, ...prefix] = scorerCommand(options);
  return new Promise((resolve, reject) => {
    execFile(
      cmd!,
      [...prefix, ...args],
      { timeout: options?.timeoutMs ?? 120_000, maxBuffer: 64 * 1024 * 1024 },
      (error, stdout, stderr) => {
        if (error) {
          // structured scorer errors arrive as JSON on stderr
          try {
            const payload = JSON.parse(stderr.trim().split("\n").pop() ?? "");
            if (typeof payload.error === "string") {
              reject(new ScoringError(payload.error, payload.message ?? payload.error));
              return;
            }
          } catch {
            // not a structured error; fall through
          }
          reject(new ScoringError("ScorerUnavailable", `${error.message}\n${stderr}`));
          return;
        }
        resolve({ stdout, stderr });
      },
    );
  });
}

function configArgs(config?: BridgeConfig): string[] {
  const merged = { ...DEFAULT_CONFIG, ...(config ?? {}) };
  return [
    "--k", String(merged.k),
    "--percentile", String(merged.percentile),
    "--scale-mode", merged.scale_mode,
    "--on-disconnect", merged.on_disconnect,
  ];
}

/** Score one 2D array; resolves to the flat report mapping. */
export async function scoreArray(
  array: number[][] | Matrix,
  config?: BridgeConfig,
  options?: BridgeOptions,
): Promise<CompactnessReport> {
  const matrix = toMatrix(array);
  const dir = await mkdtemp(join(tmpdir(), "mstc-bridge-"));
  try {
    const file = join(dir, "map.npy");
    await writeFile(file, writeNpy(matrix));
    const { stdout } = await runScorer(["score", file, "--json", ...configArgs(config)], options);
    return JSON.parse(stdout) as CompactnessReport;
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

/** Score a sequence of arrays; order-preserving, one report per input. */
export async function scoreBatch(
  arrays: Array<number[][] | Matrix>,
  config?: BridgeConfig,
  options?: BridgeOptions,
): Promise<CompactnessReport[]> {
  const reports: CompactnessReport[] = [];
  for (const array of arrays) {
    reports.push(await scoreArray(array, config, options));
  }
  return reports;
}

/** Version string of the scorer CLI. */
export async function version(options?: BridgeOptions): Promise<string> {
  const { stdout } = await runScorer(["--version"], options);
  return stdout.trim().split(/\s+/).pop() ?? stdout.trim();
}

// contract-fidelity aliases for snake_case consumers
export { scoreArray as score_array, scoreBatch as score_batch };
