/** Shared shapes for the capture form and its API calls. */
export {};
