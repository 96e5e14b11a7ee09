import type {
  Admission,
  ApiError,
  ChatLog,
  ChatSummary,
  DataRequest,
  ExamRequest,
  Hospital,
  MedicalReport,
  ResolvedRecord,
  Role,
  SummaryResult,
  VisitSummary,
  XrayResult,
} from "./types";

export class RequestFailed extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ApiError,
  ) {
    super(`${body.error_kind}: ${body.detail}`);
  }
}

/** Surface consumed by every view; HttpApi talks to the backend, tests
 * substitute a fixture-backed fake. */
export interface Api {
  login(principalId: string, role: Role): Promise<string>;
  profile(): Promise<{ kind: string; id: string; name: string }>;

  registerPatient(body: { national_id: string; name: string; contact?: string }): Promise<string>;
  admissions(filter?: { doctor_id?: string; patient_id?: string }): Promise<Admission[]>;
  admit(patientId: string, doctorId: string): Promise<Admission>;
  discharge(admissionId: string): Promise<Admission>;

  dataRequests(state?: string): Promise<DataRequest[]>;
  submitDataRequest(body: { data_type: string; issuance_date: string; document_ref: string }): Promise<string>;
  forwardDataRequest(requestId: string, doctorId: string): Promise<DataRequest>;
  resolveDataRequest(requestId: string, verdict: "approved" | "rejected"): Promise<DataRequest>;

  examRequests(state?: string): Promise<ExamRequest[]>;
  requestExamination(requestedType: string): Promise<ExamRequest>;
  scheduleExamination(requestId: string, doctorId: string): Promise<Admission>;

  hospitals(): Promise<Hospital[]>;

  createRecord(patientId: string): Promise<void>;
  record(patientId: string): Promise<ResolvedRecord>;
  visits(patientId: string): Promise<VisitSummary[]>;
  createVisit(patientId: string, body: Record<string, unknown>): Promise<string>;
  createEntity(patientId: string, kind: string, body: Record<string, unknown>): Promise<string>;
  deleteEntity(patientId: string, kind: string, entityId: string): Promise<void>;

  summarize(patientId: string): Promise<SummaryResult>;
  report(patientId: string, visitId: string): Promise<MedicalReport>;
  xrayUpload(patientId: string, file: Blob, format: string): Promise<XrayResult>;
  xrayReview(resultId: string, verdict: string, finalLabel?: string): Promise<XrayResult>;
  xrayHistory(patientId: string): Promise<XrayResult[]>;

  chats(): Promise<ChatSummary[]>;
  chatHistory(conversationId: string): Promise<ChatLog>;
  chatInitiate(userInput: string): Promise<{ conversation_id: string; bot_reply: string }>;
  chatContinue(conversationId: string, userInput: string): Promise<string>;
}

export class HttpApi implements Api {
  private token: string | null = null;

  constructor(private readonly baseUrl: string) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async call<T>(method: string, path: string, body?: unknown, form?: FormData): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    let payload: BodyInit | undefined;
    if (form !== undefined) {
      payload = form;
    } else if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      payload = JSON.stringify(body);
    }
    const response = await fetch(`${this.baseUrl}${path}`, { method, headers, body: payload });
    const text = await response.text();
    if (!response.ok) {
      let parsed: ApiError;
      try {
        parsed = JSON.parse(text) as ApiError;
      } catch {
        parsed = { error_kind: "http_error", detail: text || response.statusText };
      }
      throw new RequestFailed(response.status, parsed);
    }
    if (!text) return undefined as T;
    const contentType = response.headers.get("content-type") ?? "";
    if (contentType.includes("ndjson")) return text as unknown as T;
    return JSON.parse(text) as T;
  }

  async login(principalId: string, role: Role): Promise<string> {
    const out = await this.call<{ access_token: string }>("POST", "/auth/login", {
      principal_id: principalId,
      role,
    });
    this.token = out.access_token;
    return out.access_token;
  }

  profile() {
    return this.call<{ kind: string; id: string; name: string }>("GET", "/api/user/profile");
  }

  async registerPatient(body: { national_id: string; name: string; contact?: string }) {
    const out = await this.call<{ patient_id: string }>("POST", "/api/patients", body);
    return out.patient_id;
  }

  admissions(filter?: { doctor_id?: string; patient_id?: string }) {
    const params = new URLSearchParams();
    if (filter?.doctor_id) params.set("doctor_id", filter.doctor_id);
    if (filter?.patient_id) params.set("patient_id", filter.patient_id);
    const query = params.toString();
    return this.call<Admission[]>("GET", `/api/admissions${query ? `?${query}` : ""}`);
  }

  admit(patientId: string, doctorId: string) {
    return this.call<Admission>("POST", "/api/admissions", {
      patient_id: patientId,
      doctor_id: doctorId,
    });
  }

  discharge(admissionId: string) {
    return this.call<Admission>("POST", `/api/admissions/${admissionId}/discharge`, {});
  }

  dataRequests(state?: string) {
    return this.call<DataRequest[]>(
      "GET",
      `/api/requests/data-addition${state ? `?state=${state}` : ""}`,
    );
  }

  async submitDataRequest(body: { data_type: string; issuance_date: string; document_ref: string }) {
    const out = await this.call<{ request_id: string }>("POST", "/api/requests/data-addition", body);
    return out.request_id;
  }

  forwardDataRequest(requestId: string, doctorId: string) {
    return this.call<DataRequest>("POST", `/api/requests/data-addition/${requestId}/forward`, {
      doctor_id: doctorId,
    });
  }

  resolveDataRequest(requestId: string, verdict: "approved" | "rejected") {
    return this.call<DataRequest>("POST", `/api/requests/data-addition/${requestId}/resolve`, {
      verdict,
    });
  }

  examRequests(state?: string) {
    return this.call<ExamRequest[]>(
      "GET",
      `/api/requests/examination${state ? `?state=${state}` : ""}`,
    );
  }

  requestExamination(requestedType: string) {
    return this.call<ExamRequest>("POST", "/api/requests/examination", {
      requested_type: requestedType,
    });
  }

  scheduleExamination(requestId: string, doctorId: string) {
    return this.call<Admission>("POST", `/api/requests/examination/${requestId}/schedule`, {
      doctor_id: doctorId,
    });
  }

  hospitals() {
    return this.call<Hospital[]>("GET", "/api/hospitals");
  }

  async createRecord(patientId: string): Promise<void> {
    await this.call("POST", "/api/records", { patient_id: patientId });
  }

  record(patientId: string) {
    return this.call<ResolvedRecord>("GET", `/api/records/${patientId}`);
  }

  visits(patientId: string) {
    return this.call<VisitSummary[]>("GET", `/api/records/${patientId}/visits`);
  }

  async createVisit(patientId: string, body: Record<string, unknown>) {
    const out = await this.call<{ visit_id: string }>(
      "POST",
      `/api/records/${patientId}/visits`,
      body,
    );
    return out.visit_id;
  }

  async createEntity(patientId: string, kind: string, body: Record<string, unknown>) {
    const out = await this.call<{ entity_id: string }>(
      "POST",
      `/api/records/${patientId}/${kind}`,
      body,
    );
    return out.entity_id;
  }

  deleteEntity(patientId: string, kind: string, entityId: string) {
    return this.call<void>("DELETE", `/api/records/${patientId}/${kind}/${entityId}`);
  }

  summarize(patientId: string) {
    return this.call<SummaryResult>("POST", `/api/ai/summarize/${patientId}`, {});
  }

  report(patientId: string, visitId: string) {
    return this.call<MedicalReport>("POST", `/api/ai/report/${patientId}/${visitId}`, {});
  }

  xrayUpload(patientId: string, file: Blob, format: string) {
    const form = new FormData();
    form.append("image", file, "upload.png");
    form.append("image_format", format);
    return this.call<XrayResult>("POST", `/api/ai/xray/${patientId}`, undefined, form);
  }

  xrayReview(resultId: string, verdict: string, finalLabel?: string) {
    return this.call<XrayResult>("POST", `/api/ai/xray/${resultId}/review`, {
      verdict,
      final_label: finalLabel ?? null,
    });
  }

  xrayHistory(patientId: string) {
    return this.call<XrayResult[]>("GET", `/api/ai/xray/history/${patientId}`);
  }

  chats() {
    return this.call<ChatSummary[]>("GET", "/chats/");
  }

  chatHistory(conversationId: string) {
    return this.call<ChatLog>("GET", `/chat/${conversationId}`);
  }

  chatInitiate(userInput: string) {
    return this.call<{ conversation_id: string; bot_reply: string }>("POST", "/chat/initiate/", {
      user_input: userInput,
    });
  }

  async chatContinue(conversationId: string, userInput: string) {
    const out = await this.call<{ bot_reply: string }>("POST", "/chat/continue/", {
      conversation_id: conversationId,
      user_input: userInput,
    });
    return out.bot_reply;
  }
}
