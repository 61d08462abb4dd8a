// Parameter-form submission flow, DOM-free for testability: validation
// gates the network call, so invalid settings never produce a request.

import type { ApiClient } from "./api.js";
import type { ParameterSettings } from "./types.js";
import { FieldError, validateSettings } from "./validate.js";

export async function trySubmit(
  settings: Partial<ParameterSettings>,
  api: Pick<ApiClient, "submitJob">,
  onJob: (jobId: string) => void,
): Promise<FieldError[]> {
  const errors = validateSettings(settings);
  if (errors.length > 0) {
    return errors;
  }
  const { job_id } = await api.submitJob(settings as ParameterSettings);
  onJob(job_id);
  return [];
}
