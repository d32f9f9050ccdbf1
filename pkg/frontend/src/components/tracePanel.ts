import type { Trace, TraceEvent } from "../api.js";

// Summarizes the retrieval run ("Thinking through N sections …") with the
// raw events behind an expandable details block.
export function renderTrace(container: HTMLElement, trace: Trace | null): void {
  container.innerHTML = "";
  if (trace === null) {
    return;
  }
  const walk = trace.events.find((e) => e.type === "walk") as TraceEvent | undefined;
  const packets = trace.events.find((e) => e.type === "packets") as TraceEvent | undefined;
  const verifications = trace.events.filter((e) => e.type === "verification");

  const summary = document.createElement("div");
  summary.className = "trace-summary";
  const selected = walk ? (walk["selected"] as number) : 0;
  const packetCount = packets ? (packets["packets"] as unknown[]).length : 0;
  summary.textContent =
    `Thinking through ${selected} sections · ${packetCount} evidence passages` +
    (verifications.length ? ` · ${verifications.length} verification pass` +
      (verifications.length === 1 ? "" : "es") : "");
  container.appendChild(summary);

  const details = document.createElement("details");
  details.className = "trace-detail";
  const label = document.createElement("summary");
  label.textContent = "Retrieval trace";
  details.appendChild(label);
  const list = document.createElement("ol");
  for (const event of trace.events) {
    const item = document.createElement("li");
    item.className = `trace-event trace-${event.type}`;
    item.textContent = describeEvent(event);
    list.appendChild(item);
  }
  details.appendChild(list);
  container.appendChild(details);
}

function describeEvent(event: TraceEvent): string {
  switch (event.type) {
    case "decomposition": {
      const subqueries = event["subqueries"] as Array<{ text: string; intent: string }>;
      return `decomposed into ${subqueries.length}: ` +
        subqueries.map((s) => `${s.intent} "${s.text}"`).join("; ");
    }
    case "plan": {
      const plan = event["plan"] as { per_subquery: Array<{ strategy: string }> };
      return "strategies: " + plan.per_subquery.map((p) => p.strategy).join(", ");
    }
    case "walk": {
      const walkTrace = event["trace"] as { steps: unknown[]; stop_reason: string };
      return `walked ${walkTrace.steps.length} steps (${walkTrace.stop_reason}), ` +
        `selected ${event["selected"]}`;
    }
    case "packets":
      return `${(event["packets"] as unknown[]).length} evidence packets drafted`;
    case "verification":
      return `verification: coverage ${event["coverage"]}, agreement ${event["agreement"]}, ` +
        `decision ${event["decision"]}`;
    case "answer":
      return `answer: ${event["kind"]}`;
    default:
      return event.type;
  }
}
