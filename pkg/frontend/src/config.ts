/** Resolve the tetunsearch service base URL at runtime. */
export function serviceUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("service");
  if (fromQuery) return fromQuery.replace(/\/$/, "");
  const fromGlobal = (window as { TETUNSEARCH_SERVICE_URL?: string }).TETUNSEARCH_SERVICE_URL;
  if (fromGlobal) return fromGlobal.replace(/\/$/, "");
  return "";
}
