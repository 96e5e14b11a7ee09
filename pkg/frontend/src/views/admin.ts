import type { Api } from "../api";
import { RequestFailed } from "../api";
import { clear, el, labeled, section, toast } from "../dom";
import { STRINGS } from "../strings";
import type { Admission } from "../types";

const S = STRINGS.admin;

/** Administrator view: registration, the admissions board, and the two
 * request queues. No clinical data is fetched or rendered here; every action
 * maps 1:1 to a directory endpoint and the board always re-reads the server
 * verdict (no optimistic updates). */
export async function renderAdminView(root: HTMLElement, api: Api): Promise<void> {
  clear(root);
  root.dataset.view = "admin";
  root.append(el("h1", {}, [S.heading]));

  root.append(registrationForm(root, api));
  root.append(await admissionsBoard(root, api));
  root.append(await dataRequestQueue(root, api));
  root.append(await examRequestQueue(root, api));
  root.append(await doctorsAndAdmissions(api));
  root.append(await patientsAndAdmissions(api));
}

function registrationForm(root: HTMLElement, api: Api): HTMLElement {
  const nationalId = el("input", { name: "national_id", required: "true" });
  const name = el("input", { name: "name", required: "true" });
  const contact = el("input", { name: "contact" });
  const form = el("form", { "data-form": "register-patient" }, [
    labeled(S.nationalId, nationalId),
    labeled(S.name, name),
    labeled(S.contact, contact),
    el("button", { type: "submit" }, [S.registerPatient]),
  ]);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      const patientId = await api.registerPatient({
        national_id: nationalId.value,
        name: name.value,
        contact: contact.value,
      });
      toast(root, `registered ${patientId}`);
      await renderAdminView(root, api);
    } catch (error) {
      showError(root, error);
    }
  });
  return section(S.registerPatient, "admin-registration", [form]);
}

async function admissionsBoard(root: HTMLElement, api: Api): Promise<HTMLElement> {
  const admissions = await api.admissions();
  const patientId = el("input", { name: "patient_id" });
  const doctorId = el("input", { name: "doctor_id" });
  const admitForm = el("form", { "data-form": "admit" }, [
    labeled(S.patientId, patientId),
    labeled(S.doctorId, doctorId),
    el("button", { type: "submit", "data-action": "admit" }, [S.admit]),
  ]);
  admitForm.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      await api.admit(patientId.value, doctorId.value);
      await renderAdminView(root, api); // board reflects the server verdict
    } catch (error) {
      showError(root, error);
    }
  });

  const rows = admissions.map((admission) => admissionRow(root, api, admission));
  const table = el("table", { "data-list": "admissions" }, [
    el("thead", {}, [
      el("tr", {}, [
        el("th", {}, ["id"]),
        el("th", {}, ["patient"]),
        el("th", {}, ["doctor"]),
        el("th", {}, ["state"]),
        el("th", {}, [""]),
      ]),
    ]),
    el("tbody", {}, rows),
  ]);
  return section(S.admissionsBoard, "admin-admissions", [admitForm, table]);
}

function admissionRow(root: HTMLElement, api: Api, admission: Admission): HTMLElement {
  const cells = [
    el("td", {}, [admission.admission_id]),
    el("td", {}, [admission.patient_id]),
    el("td", {}, [admission.doctor_id]),
    el("td", { "data-state": admission.state }, [admission.state]),
  ];
  const actions = el("td", {});
  if (admission.state === "active") {
    const button = el("button", { "data-action": "discharge" }, [S.discharge]);
    button.addEventListener("click", async () => {
      try {
        await api.discharge(admission.admission_id);
        await renderAdminView(root, api);
      } catch (error) {
        showError(root, error);
      }
    });
    actions.append(button);
  }
  cells.push(actions);
  return el("tr", { "data-admission": admission.admission_id }, cells);
}

async function dataRequestQueue(root: HTMLElement, api: Api): Promise<HTMLElement> {
  const requests = await api.dataRequests();
  const rows = requests.map((request) => {
    const row = el("li", { "data-request": request.request_id }, [
      `${request.request_id}: ${request.data_type} from ${request.patient_id} `,
      el("span", { class: "chip", "data-state": request.state }, [request.state]),
    ]);
    if (request.state === "submitted") {
      const doctorInput = el("input", { name: "doctor_id", placeholder: S.doctorId });
      const forward = el("button", { "data-action": "forward" }, [S.forward]);
      forward.addEventListener("click", async () => {
        try {
          await api.forwardDataRequest(request.request_id, doctorInput.value);
          await renderAdminView(root, api);
        } catch (error) {
          showError(root, error);
        }
      });
      row.append(doctorInput, forward);
    }
    return row;
  });
  return section(S.dataRequests, "admin-data-requests", [el("ul", {}, rows)]);
}

async function examRequestQueue(root: HTMLElement, api: Api): Promise<HTMLElement> {
  const requests = await api.examRequests();
  const rows = requests.map((request) => {
    const row = el("li", { "data-request": request.request_id }, [
      `${request.request_id}: ${request.requested_type} for ${request.patient_id} `,
      el("span", { class: "chip", "data-state": request.state }, [request.state]),
    ]);
    if (request.state === "pending") {
      const doctorInput = el("input", { name: "doctor_id", placeholder: S.doctorId });
      const schedule = el("button", { "data-action": "schedule" }, [S.schedule]);
      schedule.addEventListener("click", async () => {
        try {
          await api.scheduleExamination(request.request_id, doctorInput.value);
          await renderAdminView(root, api);
        } catch (error) {
          showError(root, error);
        }
      });
      row.append(doctorInput, schedule);
    }
    return row;
  });
  return section(S.examRequests, "admin-exam-requests", [el("ul", {}, rows)]);
}

async function doctorsAndAdmissions(api: Api): Promise<HTMLElement> {
  const admissions = await api.admissions();
  const byDoctor = new Map<string, Admission[]>();
  for (const admission of admissions) {
    const list = byDoctor.get(admission.doctor_id) ?? [];
    list.push(admission);
    byDoctor.set(admission.doctor_id, list);
  }
  const items = [...byDoctor.entries()].map(([doctorId, list]) =>
    el("li", {}, [`${doctorId}: ${list.map((a) => `${a.patient_id} (${a.state})`).join(", ")}`]),
  );
  return section(S.doctorsAndAdmissions, "admin-doctors-admissions", [el("ul", {}, items)]);
}

async function patientsAndAdmissions(api: Api): Promise<HTMLElement> {
  const admissions = await api.admissions();
  const byPatient = new Map<string, Admission[]>();
  for (const admission of admissions) {
    const list = byPatient.get(admission.patient_id) ?? [];
    list.push(admission);
    byPatient.set(admission.patient_id, list);
  }
  const items = [...byPatient.entries()].map(([patientId, list]) =>
    el("li", {}, [`${patientId}: ${list.map((a) => `${a.doctor_id} (${a.state})`).join(", ")}`]),
  );
  return section(S.patientsAndAdmissions, "admin-patients-admissions", [el("ul", {}, items)]);
}

function showError(root: HTMLElement, error: unknown): void {
  if (error instanceof RequestFailed) {
    toast(root, `${error.body.error_kind}: ${error.body.detail}`, "error");
  } else {
    toast(root, String(error), "error");
  }
}
