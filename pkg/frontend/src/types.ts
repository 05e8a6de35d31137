/** API response shapes, validated at the boundary so malformed payloads
 *  never reach the view state. */

import { z } from "zod";

export const ResultCardSchema = z.object({
  id: z.string(),
  speaker: z.string(),
  facet: z.string(),
  tag: z.string(),
  incidence: z.string(),
  body: z.string().nullable(),
  joint: z.number(),
  dr: z.number(),
  score: z.number(),
  degree: z.number(),
});

export const OkResponseSchema = z.object({
  status: z.literal("ok"),
  snapshot: z.string(),
  session: z.string(),
  query: z.string(),
  tags: z.array(z.string()),
  facet_filter: z.string().nullable(),
  results: z.array(ResultCardSchema),
  refinements: z.array(z.string()),
});

export const CollapseOptionSchema = z.object({
  option: z.string(),
  speakers: z.array(z.string()),
  distinct_speakers: z.array(z.string()),
  facet: z.string(),
  score: z.number(),
});

export const CollapseRequiredSchema = z.object({
  status: z.literal("collapse_required"),
  snapshot: z.string(),
  session: z.string(),
  options: z.array(CollapseOptionSchema),
});

export const DialogueResponseSchema = z.discriminatedUnion("status", [
  OkResponseSchema,
  CollapseRequiredSchema,
]);

export const SessionInfoSchema = z.object({
  session: z.string(),
  snapshot: z.string().nullable(),
});

export const HistoryEntrySchema = z.object({
  step: z.string(),
  status: z.string(),
});

export const SessionViewResponseSchema = z.object({
  session: z.string(),
  reader: z.string(),
  snapshot: z.string(),
  history: z.array(HistoryEntrySchema.passthrough()),
});

export type ResultCard = z.infer<typeof ResultCardSchema>;
export type OkResponse = z.infer<typeof OkResponseSchema>;
export type CollapseOption = z.infer<typeof CollapseOptionSchema>;
export type CollapseRequired = z.infer<typeof CollapseRequiredSchema>;
export type DialogueResponse = z.infer<typeof DialogueResponseSchema>;
export type SessionInfo = z.infer<typeof SessionInfoSchema>;
