/** Thin fetch wrappers around the capture service endpoints. */
/** Error carrying the service's structured error kind, when one was sent. */
export class ApiError extends Error {
    constructor(message, kind = "error", status = 0) {
        super(message);
        this.kind = kind;
        this.status = status;
        this.name = "ApiError";
    }
}
async function errorFrom(response) {
    try {
        const body = (await response.json());
        if (body.error?.message) {
            return new ApiError(body.error.message, body.error.kind ?? "error", response.status);
        }
    }
    catch {
        // fall through to the generic message
    }
    return new ApiError(`request failed with status ${response.status}`, "error", response.status);
}
export async function fetchSurvey() {
    const response = await fetch("/api/survey");
    if (!response.ok) {
        throw await errorFrom(response);
    }
    return (await response.json());
}
export async function submitResponses(payload) {
    const response = await fetch("/api/submit", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
    });
    if (!response.ok) {
        throw await errorFrom(response);
    }
    return (await response.json());
}
