// Typed client for the scribseg session service. Every number shown in the
// UI comes back from one of these calls; nothing is computed client-side.

export type MethodName = "features" | "hyperspectral" | "rgb" | "euclidean";

export interface SessionMeta {
  id: string;
  height: number;
  width: number;
  channels: number;
}

export interface DistanceMeta {
  method: string;
  min_raw: number;
  max_raw: number;
  compute_ms: number;
}

export interface CurveData {
  method: string;
  thresholds: number[];
  dice: number[];
  best_threshold: number;
  best_dice: number;
}

export interface ScribblePoint {
  x: number;
  y: number;
  label: number;
}

export interface SegmentationResult {
  maskBytes: Uint8Array;
  dice: number | null;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  async createSession(cstBytes: Uint8Array): Promise<SessionMeta> {
    const response = await fetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/octet-stream" },
      body: cstBytes as unknown as BodyInit,
    });
    await raiseForStatus(response);
    return (await response.json()) as SessionMeta;
  }

  async uploadGroundTruth(id: string, pgmBytes: Uint8Array): Promise<void> {
    const response = await fetch(`${this.base}/sessions/${id}/gt`, {
      method: "PUT",
      headers: { "Content-Type": "application/octet-stream" },
      body: pgmBytes as unknown as BodyInit,
    });
    await raiseForStatus(response);
  }

  async putScribbles(id: string, points: ScribblePoint[]): Promise<void> {
    const response = await fetch(`${this.base}/sessions/${id}/scribbles`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(points),
    });
    await raiseForStatus(response);
  }

  async computeDistance(
    id: string,
    method: MethodName,
    lambda = 1.0,
    iters = 4,
  ): Promise<DistanceMeta> {
    const query = `method=${method}&lambda=${lambda}&iters=${iters}`;
    const response = await fetch(
      `${this.base}/sessions/${id}/distance?${query}`,
      { method: "POST" },
    );
    await raiseForStatus(response);
    return (await response.json()) as DistanceMeta;
  }

  async fetchSegmentation(
    id: string,
    method: MethodName,
    t: number,
  ): Promise<SegmentationResult> {
    const response = await fetch(
      `${this.base}/sessions/${id}/segmentation?method=${method}&t=${t}`,
    );
    await raiseForStatus(response);
    const diceHeader = response.headers.get("X-Dice");
    return {
      maskBytes: new Uint8Array(await response.arrayBuffer()),
      dice: diceHeader === null ? null : Number(diceHeader),
    };
  }

  async fetchCurve(id: string, method: MethodName): Promise<CurveData> {
    const response = await fetch(
      `${this.base}/sessions/${id}/dice-curve?method=${method}`,
    );
    await raiseForStatus(response);
    return (await response.json()) as CurveData;
  }

  previewUrl(id: string): string {
    return `${this.base}/sessions/${id}/preview`;
  }
}
