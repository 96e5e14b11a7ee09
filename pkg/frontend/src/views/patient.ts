import type { Api } from "../api";
import { RequestFailed } from "../api";
import { clear, el, labeled, section, toast } from "../dom";
import { STRINGS } from "../strings";
import type { ResolvedRecord, Visit } from "../types";

const S = STRINGS.patient;

/** Patient view: read-only clinical data scoped to the signed-in patient,
 * plus the two request forms. There is no edit control anywhere; medical
 * data is entered by practitioners only. */
export async function renderPatientView(root: HTMLElement, api: Api, patientId: string): Promise<void> {
  clear(root);
  root.dataset.view = "patient";
  root.append(el("h1", {}, [S.heading]));

  let record: ResolvedRecord | null = null;
  try {
    record = await api.record(patientId);
  } catch (error) {
    if (!(error instanceof RequestFailed) || error.status !== 404) throw error;
  }

  root.append(await examinationsPanel(api, patientId, record));
  root.append(historyPanel(record));
  root.append(resultsPanel(record));
  root.append(dataAdditionForm(root, api, patientId));
  root.append(examRequestForm(root, api, patientId));
  root.append(await hospitalsPanel(api));
}

async function examinationsPanel(
  api: Api,
  patientId: string,
  record: ResolvedRecord | null,
): Promise<HTMLElement> {
  const summaries = record ? await api.visits(patientId) : [];
  const byId = new Map((record?.visits ?? []).map((visit) => [visit.visit_id, visit]));
  const rows = summaries.map((summary) => {
    const row = el("li", { "data-visit": summary.visit_id }, [
      `${summary.visit_id} | ${summary.examination_type} | ${summary.date} | ${summary.doctor_name}`,
    ]);
    const visit = byId.get(summary.visit_id);
    if (visit) row.append(visitDetail(visit));
    return row;
  });
  return section(S.examinations, "patient-examinations", [el("ul", {}, rows)]);
}

function visitDetail(visit: Visit): HTMLElement {
  return el("dl", { class: "visit-detail", "data-screen": "visit-detail" }, [
    el("dt", {}, ["Complaints"]),
    el("dd", { "data-field": "complaints" }, [visit.complaints]),
    el("dt", {}, ["Diagnosis"]),
    el("dd", { "data-field": "diagnosis" }, [visit.diagnosis]),
    el("dt", {}, ["Symptoms"]),
    el("dd", { "data-field": "symptoms" }, [visit.symptoms.join(", ") || S.none]),
    el("dt", {}, ["Treatments"]),
    el("dd", { "data-field": "treatments" }, [
      visit.treatments.map((t) => `${t.name} ${t.dosage}`).join(", ") || S.none,
    ]),
    el("dt", {}, ["Doctor's notes"]),
    el("dd", { "data-field": "notes" }, [visit.notes || S.none]),
  ]);
}

function historyPanel(record: ResolvedRecord | null): HTMLElement {
  const group = (title: string, name: string, items: string[]) =>
    el("div", { "data-history": name }, [
      el("h3", {}, [title]),
      items.length
        ? el("ul", {}, items.map((item) => el("li", {}, [item])))
        : el("p", { class: "empty" }, [S.none]),
    ]);
  return section(S.history, "patient-history", [
    group(S.allergies, "allergies", (record?.allergies ?? []).map(
      (a) => `${a.allergen} (${a.category}, ${a.severity})`,
    )),
    group(S.conditions, "conditions", (record?.conditions ?? [])
      .filter((c) => c.chronic)
      .map((c) => c.name)),
    group(S.surgeries, "surgeries", (record?.surgeries ?? []).map((s) => `${s.name} (${s.date})`)),
    group(S.medications, "medications", (record?.medications ?? [])
      .filter((m) => m.active)
      .map((m) => `${m.name} ${m.dosage} ${m.frequency}`)),
    group(S.immunizations, "immunizations", (record?.immunizations ?? []).map(
      (i) => `${i.vaccine} (${i.date})`,
    )),
  ]);
}

function resultsPanel(record: ResolvedRecord | null): HTMLElement {
  const attachments = (record?.visits ?? []).flatMap((visit) =>
    visit.attachments.map((a) => `${visit.date}: ${a.kind} (${a.storage_ref})`),
  );
  return section(S.results, "patient-results", [
    attachments.length
      ? el("ul", {}, attachments.map((line) => el("li", {}, [line])))
      : el("p", { class: "empty" }, [S.none]),
  ]);
}

function dataAdditionForm(root: HTMLElement, api: Api, patientId: string): HTMLElement {
  const dataType = el("select", { name: "data_type" },
    ["test_result", "prescription", "report", "diagnosis", "surgery"].map((value) =>
      el("option", { value }, [value]),
    ),
  );
  const issuanceDate = el("input", { name: "issuance_date", type: "date" });
  const documentRef = el("input", { name: "document_ref" });
  const inlineError = el("p", { class: "inline-error", hidden: "true" });
  const form = el("form", { "data-form": "data-addition" }, [
    labeled(S.dataType, dataType),
    labeled(S.issuanceDate, issuanceDate),
    labeled(S.documentRef, documentRef),
    inlineError,
    el("button", { type: "submit" }, [S.submit]),
  ]);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    if (!issuanceDate.value) {
      inlineError.textContent = S.issuanceDateRequired;
      inlineError.hidden = false;
      return;
    }
    inlineError.hidden = true;
    try {
      await api.submitDataRequest({
        data_type: dataType.value,
        issuance_date: issuanceDate.value,
        document_ref: documentRef.value,
      });
      await renderPatientView(root, api, patientId);
    } catch (error) {
      showError(root, error);
    }
  });
  return section(S.requestData, "patient-data-addition", [form]);
}

function examRequestForm(root: HTMLElement, api: Api, patientId: string): HTMLElement {
  const requestedType = el("input", { name: "requested_type" });
  const form = el("form", { "data-form": "request-examination" }, [
    labeled(S.examType, requestedType),
    el("button", { type: "submit" }, [S.submit]),
  ]);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      await api.requestExamination(requestedType.value);
      await renderPatientView(root, api, patientId);
    } catch (error) {
      showError(root, error);
    }
  });
  return section(S.requestExam, "patient-request-examination", [form]);
}

async function hospitalsPanel(api: Api): Promise<HTMLElement> {
  const hospitals = await api.hospitals();
  return section(S.hospitals, "patient-hospitals", [
    el("ul", {}, hospitals.map((h) => el("li", {}, [`${h.name} (${h.region})`]))),
  ]);
}

function showError(root: HTMLElement, error: unknown): void {
  if (error instanceof RequestFailed) {
    toast(root, `${error.body.error_kind}: ${error.body.detail}`, "error");
  } else {
    toast(root, String(error), "error");
  }
}
