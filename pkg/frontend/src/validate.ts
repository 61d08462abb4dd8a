// Client-side mirror of the server's parameter-settings rules. The form
// refuses to submit while any of these fail; the server re-checks anyway.

import type { ParameterSettings } from "./types.js";

export interface FieldError {
  field: string;
  message: string;
}

export function validateSettings(settings: Partial<ParameterSettings>): FieldError[] {
  const errors: FieldError[] = [];
  if (!settings.base_metal) {
    errors.push({ field: "base_metal", message: "choose a base metal" });
  }
  if (!settings.support) {
    errors.push({ field: "support", message: "choose a support" });
  }
  if (!settings.prep_method) {
    errors.push({ field: "prep_method", message: "choose a preparation method" });
  }
  const range = settings.temperature_range;
  if (!range || range.some((v) => Number.isNaN(v))) {
    errors.push({ field: "temperature_range", message: "set both temperatures" });
  } else if (range[0] > range[1]) {
    errors.push({
      field: "temperature_range",
      message: "upper temperature must not be below the lower one",
    });
  }
  for (const [dim, bounds] of Object.entries(settings.bound_overrides ?? {})) {
    if (bounds[0] > bounds[1]) {
      errors.push({ field: dim, message: `${dim}: lower bound exceeds upper` });
    }
  }
  return errors;
}
