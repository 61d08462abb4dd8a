import { describe, expect, it } from "vitest";

import { validateSettings } from "../src/validate.js";

const GOOD = {
  base_metal: "Pt",
  support: "alpha-MoC",
  promoter: "Au",
  prep_method: "incipient-wetness-impregnation",
  temperature_range: [150, 300] as [number, number],
};

describe("validateSettings", () => {
  it("accepts the case-study settings", () => {
    expect(validateSettings(GOOD)).toEqual([]);
  });

  it("blocks an inverted temperature range", () => {
    const errors = validateSettings({
      ...GOOD,
      temperature_range: [350, 300],
    });
    expect(errors).toHaveLength(1);
    expect(errors[0].field).toBe("temperature_range");
  });

  it("requires the categorical choices", () => {
    const errors = validateSettings({ temperature_range: [150, 300] });
    const fields = errors.map((e) => e.field);
    expect(fields).toContain("base_metal");
    expect(fields).toContain("support");
    expect(fields).toContain("prep_method");
  });

  it("flags NaN temperatures", () => {
    const errors = validateSettings({
      ...GOOD,
      temperature_range: [NaN, 300],
    });
    expect(errors.some((e) => e.field === "temperature_range")).toBe(true);
  });

  it("checks override ordering", () => {
    const errors = validateSettings({
      ...GOOD,
      bound_overrides: { base_wt_pct: [10, 2] },
    });
    expect(errors.some((e) => e.field === "base_wt_pct")).toBe(true);
  });

  it("treats a missing promoter as valid", () => {
    expect(validateSettings({ ...GOOD, promoter: null })).toEqual([]);
  });
});
