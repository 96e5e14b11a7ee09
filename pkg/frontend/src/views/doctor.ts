import type { Api } from "../api";
import { RequestFailed } from "../api";
import { clear, el, labeled, section, toast } from "../dom";
import { STRINGS } from "../strings";
import type { ResolvedRecord, XrayResult } from "../types";

const S = STRINGS.doctor;

/** Doctor view: assigned patients, the record browser with entity editors,
 * examinations, and the AI tools. Every AI output carries a provenance label
 * and a human-decision control; the doctor has the final say. */
export async function renderDoctorView(root: HTMLElement, api: Api, doctorId: string): Promise<void> {
  clear(root);
  root.dataset.view = "doctor";
  root.append(el("h1", {}, [S.heading]));

  const admissions = await api.admissions({ doctor_id: doctorId });
  const activePatients = [...new Set(
    admissions.filter((a) => a.state === "active").map((a) => a.patient_id),
  )];

  const workspace = el("div", { "data-screen": "doctor-workspace" });
  const list = el("ul", { "data-list": "assigned-patients" }, activePatients.map((patientId) => {
    const open = el("button", { "data-action": "open-record", "data-patient": patientId }, [
      S.openRecord,
    ]);
    open.addEventListener("click", () => {
      void openRecord(workspace, api, patientId);
    });
    return el("li", {}, [patientId, " ", open]);
  }));
  root.append(section(S.assigned, "doctor-assigned", [list]));
  root.append(workspace);
  root.append(await chatPanel(api));
}

export async function openRecord(workspace: HTMLElement, api: Api, patientId: string): Promise<void> {
  clear(workspace);
  let record: ResolvedRecord;
  try {
    record = await api.record(patientId);
  } catch (error) {
    if (error instanceof RequestFailed && error.status === 403) {
      workspace.append(
        section(STRINGS.errors.accessDenied, "access-denied", [
          el("p", {}, [`${error.body.error_kind}: ${error.body.detail}`]),
        ]),
      );
      return;
    }
    throw error;
  }
  workspace.append(recordBrowser(workspace, api, patientId, record));
  workspace.append(examinationForm(workspace, api, patientId));
  workspace.append(aiPanel(workspace, api, patientId, record));
  workspace.append(await xrayPanel(workspace, api, patientId));
}

function recordBrowser(
  workspace: HTMLElement,
  api: Api,
  patientId: string,
  record: ResolvedRecord,
): HTMLElement {
  const entityList = (
    kind: string,
    items: { id: string; text: string }[],
  ): HTMLElement => {
    const rows = items.map(({ id, text }) => {
      const remove = el("button", { "data-action": "delete-entity", "data-kind": kind }, [
        S.deleteEntity,
      ]);
      remove.addEventListener("click", async () => {
        try {
          await api.deleteEntity(patientId, kind, id);
          await openRecord(workspace, api, patientId);
        } catch (error) {
          showError(workspace, error);
        }
      });
      return el("li", { "data-entity": id }, [text, " ", remove]);
    });
    return el("ul", { "data-entities": kind }, rows);
  };

  const allergyForm = entityForm(workspace, api, patientId, "allergy", [
    ["allergen", "text"],
    ["category", "text"],
    ["severity", "text"],
  ]);
  const conditionForm = entityForm(workspace, api, patientId, "condition", [
    ["name", "text"],
    ["chronic", "checkbox"],
  ]);

  return section("Record browser", "record-browser", [
    el("h3", {}, ["Conditions"]),
    entityList("condition", record.conditions.map((c) => ({
      id: c.condition_id,
      text: `${c.name}${c.chronic ? " (chronic)" : ""}`,
    }))),
    conditionForm,
    el("h3", {}, ["Allergies"]),
    entityList("allergy", record.allergies.map((a) => ({
      id: a.allergy_id,
      text: `${a.allergen} (${a.category}, ${a.severity})`,
    }))),
    allergyForm,
    el("h3", {}, ["Medications"]),
    entityList("medication", record.medications.map((m) => ({
      id: m.medication_id,
      text: `${m.name} ${m.dosage} ${m.frequency}`,
    }))),
    el("h3", {}, ["Visits"]),
    el("ul", { "data-entities": "visit" }, record.visits.map((visit) =>
      el("li", { "data-visit": visit.visit_id }, [
        `${visit.date} ${visit.examination_type}: ${visit.diagnosis}`,
      ]),
    )),
  ]);
}

function entityForm(
  workspace: HTMLElement,
  api: Api,
  patientId: string,
  kind: string,
  fields: [string, string][],
): HTMLElement {
  const inputs = fields.map(([name, type]) => el("input", { name, type, placeholder: name }));
  const form = el("form", { "data-form": `add-${kind}` }, [
    ...inputs.map((input) => labeled(input.getAttribute("placeholder") ?? "", input)),
    el("button", { type: "submit", "data-action": `add-${kind}` }, [S.addEntity]),
  ]);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const body: Record<string, unknown> = {};
    for (const input of inputs) {
      const name = input.getAttribute("name")!;
      body[name] = input.type === "checkbox" ? input.checked : input.value;
    }
    try {
      await api.createEntity(patientId, kind, body);
      await openRecord(workspace, api, patientId);
    } catch (error) {
      showError(workspace, error);
    }
  });
  return form;
}

function examinationForm(workspace: HTMLElement, api: Api, patientId: string): HTMLElement {
  const examinationType = el("select", { name: "examination_type" },
    ["routine", "follow_up", "emergency"].map((value) => el("option", { value }, [value])),
  );
  const date = el("input", { name: "date", type: "date" });
  const complaints = el("input", { name: "complaints" });
  const diagnosis = el("input", { name: "diagnosis" });
  const notes = el("textarea", { name: "notes" });
  const form = el("form", { "data-form": "new-examination" }, [
    labeled("Type", examinationType),
    labeled("Date", date),
    labeled("Complaints", complaints),
    labeled("Diagnosis", diagnosis),
    labeled("Notes", notes),
    el("button", { type: "submit", "data-action": "create-visit" }, [S.newExamination]),
  ]);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      await api.createVisit(patientId, {
        examination_type: examinationType.value,
        date: date.value,
        complaints: complaints.value,
        diagnosis: diagnosis.value,
        notes: notes.value,
      });
      await openRecord(workspace, api, patientId);
    } catch (error) {
      showError(workspace, error);
    }
  });
  return section(S.newExamination, "doctor-new-examination", [form]);
}

function aiPanel(
  workspace: HTMLElement,
  api: Api,
  patientId: string,
  record: ResolvedRecord,
): HTMLElement {
  const output = el("div", { "data-screen": "ai-output" });
  const summarize = el("button", { "data-action": "summarize" }, [S.summarize]);
  summarize.addEventListener("click", async () => {
    try {
      const summary = await api.summarize(patientId);
      clear(output);
      output.append(
        el("p", { class: "provenance" }, [S.aiProvenance]),
        el("pre", { "data-field": "summary" }, [summary.summary_text]),
      );
    } catch (error) {
      showError(workspace, error);
    }
  });

  const reportButtons = record.visits.map((visit) => {
    const button = el("button", { "data-action": "report", "data-visit": visit.visit_id }, [
      `${S.report} (${visit.date})`,
    ]);
    button.addEventListener("click", async () => {
      try {
        const report = await api.report(patientId, visit.visit_id);
        clear(output);
        output.append(el("p", { class: "provenance" }, [S.aiProvenance]));
        for (const [key, text] of Object.entries(report.sections)) {
          output.append(el("h4", {}, [key]), el("pre", { "data-section": key }, [text]));
        }
      } catch (error) {
        showError(workspace, error);
      }
    });
    return button;
  });

  return section("AI tools", "doctor-ai", [summarize, ...reportButtons, output]);
}

async function xrayPanel(workspace: HTMLElement, api: Api, patientId: string): Promise<HTMLElement> {
  const history = await api.xrayHistory(patientId);
  const fileInput = el("input", { type: "file", name: "xray", accept: "image/*" });
  const upload = el("button", { "data-action": "xray-upload" }, [S.xrayUpload]);
  upload.addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      await api.xrayUpload(patientId, file, file.type.includes("jpeg") ? "jpeg" : "png");
      await openRecord(workspace, api, patientId);
    } catch (error) {
      showError(workspace, error);
    }
  });
  const cards = history.map((result) => xrayCard(workspace, api, patientId, result));
  return section("X-ray analysis", "doctor-xray", [fileInput, upload, ...cards]);
}

export function xrayCard(
  workspace: HTMLElement,
  api: Api,
  patientId: string,
  result: XrayResult,
): HTMLElement {
  const controls = el("div", { class: "review-controls" });
  for (const [verdict, label] of [
    ["confirmed", S.confirm],
    ["modified", S.modify],
    ["overridden", S.override],
  ] as const) {
    const button = el("button", { "data-action": verdict === "confirmed" ? "confirm" : verdict === "modified" ? "modify" : "override" }, [label]);
    button.addEventListener("click", async () => {
      const finalLabel =
        verdict === "confirmed" ? undefined : result.label === "Pneumonia" ? "Normal" : "Pneumonia";
      try {
        await api.xrayReview(result.result_id, verdict, finalLabel);
        await openRecord(workspace, api, patientId);
      } catch (error) {
        showError(workspace, error);
      }
    });
    controls.append(button);
  }
  return el("article", { class: "xray-card", "data-xray-card": result.result_id }, [
    el("p", { class: "provenance" }, [S.aiProvenance]),
    el("p", { "data-field": "label" }, [`${result.label}`]),
    el("p", { "data-field": "confidence" }, [`confidence ${(result.confidence * 100).toFixed(0)}%`]),
    el("p", { "data-field": "verdict" }, [result.reviewer_verdict]),
    result.final_label ? el("p", { "data-field": "final" }, [result.final_label]) : "",
    controls,
  ]);
}

async function chatPanel(api: Api): Promise<HTMLElement> {
  const transcript = el("div", { "data-screen": "chat-transcript" });
  const conversationList = el("ul", { "data-list": "conversations" });
  let activeConversation: string | null = null;

  const refreshList = async () => {
    clear(conversationList);
    for (const chat of await api.chats()) {
      const openButton = el("button", { "data-action": "open-chat" }, [chat.first_turn_preview]);
      openButton.addEventListener("click", async () => {
        activeConversation = chat.conversation_id;
        await refreshTranscript();
      });
      conversationList.append(el("li", { "data-conversation": chat.conversation_id }, [openButton]));
    }
  };

  const refreshTranscript = async () => {
    clear(transcript);
    if (!activeConversation) return;
    const log = await api.chatHistory(activeConversation);
    for (const turn of log.turns) {
      transcript.append(el("p", { class: `turn ${turn.author}` }, [`${turn.author}: ${turn.content}`]));
    }
  };

  const input = el("input", { name: "user_input", placeholder: "ask the assistant" });
  const send = el("button", { "data-action": "chat-send" }, [S.send]);
  send.addEventListener("click", async () => {
    if (!input.value) return;
    try {
      if (activeConversation === null) {
        const out = await api.chatInitiate(input.value);
        activeConversation = out.conversation_id;
      } else {
        await api.chatContinue(activeConversation, input.value);
      }
      input.value = "";
      await refreshList();
      await refreshTranscript();
    } catch (error) {
      showError(transcript, error);
    }
  });
  const newChat = el("button", { "data-action": "chat-new" }, [S.newChat]);
  newChat.addEventListener("click", () => {
    activeConversation = null;
    clear(transcript);
  });

  await refreshList();
  return section(S.chat, "doctor-chat", [
    el("p", { class: "provenance" }, [S.aiProvenance]),
    newChat,
    conversationList,
    transcript,
    input,
    send,
  ]);
}

function showError(root: HTMLElement, error: unknown): void {
  if (error instanceof RequestFailed) {
    toast(root, `${error.body.error_kind}: ${error.body.detail}`, "error");
  } else {
    toast(root, String(error), "error");
  }
}
