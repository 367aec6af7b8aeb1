// Panel content builders: turn server responses into display strings.
// Everything shown is a verbatim server figure (formatted, never derived).

import { EvalRecordJson, ReportDoc, RuleJson } from "./types.js";

export function pct(v: number): string {
  return (100 * v).toFixed(2) + "%";
}

export function evalSummaryLines(rec: EvalRecordJson): string[] {
  const lines: string[] = [];
  const classes = Object.keys(rec.hitsByClass).sort();
  for (const c of classes) {
    lines.push(`${c}: ${rec.hitsByClass[c]}`);
  }
  if (rec.totalHits === 0) {
    lines.push("no active case covered");
    return lines;
  }
  lines.push(`dominant: ${rec.dominantClass}${rec.tieBroken ? " (tie)" : ""}`);
  lines.push(`precision: ${pct(rec.precision)}`);
  lines.push(`coverage in class: ${pct(rec.coverageInClass)}`);
  lines.push(`coverage total: ${pct(rec.coverageTotal)}`);
  return lines;
}

export function ruleRowText(rule: RuleJson): string {
  const st = rule.stats;
  return `r_${rule.order + 1} ${rule.class} ` +
    `cov ${pct(st.coverageInClass)} prec ${pct(st.precision)} (${st.totalHits} cases)`;
}

export function reportFooterText(doc: ReportDoc): string {
  const t = doc.totals;
  return `covered ${t.covered}/${t.caseCount} ` +
    `recall ${t.recallPct.toFixed(2)}% ` +
    `weighted precision ${t.weightedPrecisionPct.toFixed(2)}%`;
}
