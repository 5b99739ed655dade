// Typed client for the scribseg session service. Every number shown in the
// UI comes back from one of these calls; nothing is computed client-side.
export class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
async function raiseForStatus(response) {
    if (response.ok)
        return;
    let detail = response.statusText;
    try {
        const body = await response.json();
        if (body && typeof body.detail === "string")
            detail = body.detail;
    }
    catch {
        // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
}
export class ApiClient {
    constructor(base = "") {
        this.base = base;
    }
    async createSession(cstBytes) {
        const response = await fetch(`${this.base}/sessions`, {
            method: "POST",
            headers: { "Content-Type": "application/octet-stream" },
            body: cstBytes,
        });
        await raiseForStatus(response);
        return (await response.json());
    }
    async uploadGroundTruth(id, pgmBytes) {
        const response = await fetch(`${this.base}/sessions/${id}/gt`, {
            method: "PUT",
            headers: { "Content-Type": "application/octet-stream" },
            body: pgmBytes,
        });
        await raiseForStatus(response);
    }
    async putScribbles(id, points) {
        const response = await fetch(`${this.base}/sessions/${id}/scribbles`, {
            method: "PUT",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(points),
        });
        await raiseForStatus(response);
    }
    async computeDistance(id, method, lambda = 1.0, iters = 4) {
        const query = `method=${method}&lambda=${lambda}&iters=${iters}`;
        const response = await fetch(`${this.base}/sessions/${id}/distance?${query}`, { method: "POST" });
        await raiseForStatus(response);
        return (await response.json());
    }
    async fetchSegmentation(id, method, t) {
        const response = await fetch(`${this.base}/sessions/${id}/segmentation?method=${method}&t=${t}`);
        await raiseForStatus(response);
        const diceHeader = response.headers.get("X-Dice");
        return {
            maskBytes: new Uint8Array(await response.arrayBuffer()),
            dice: diceHeader === null ? null : Number(diceHeader),
        };
    }
    async fetchCurve(id, method) {
        const response = await fetch(`${this.base}/sessions/${id}/dice-curve?method=${method}`);
        await raiseForStatus(response);
        return (await response.json());
    }
    previewUrl(id) {
        return `${this.base}/sessions/${id}/preview`;
    }
}
