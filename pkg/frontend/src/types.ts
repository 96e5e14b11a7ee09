export type Role = "patient" | "doctor" | "admin";

export interface SessionState {
  token: string;
  role: Role;
  activeView: Role;
  principalId: string;
}

export interface Admission {
  admission_id: string;
  patient_id: string;
  doctor_id: string;
  admitted_by: string;
  state: "active" | "discharged";
  admitted_at: string;
  discharged_at: string | null;
}

export interface DataRequest {
  request_id: string;
  patient_id: string;
  data_type: string;
  issuance_date: string;
  document_ref: string;
  state: "submitted" | "forwarded" | "approved" | "rejected";
  reviewing_doctor: string | null;
}

export interface ExamRequest {
  request_id: string;
  patient_id: string;
  requested_type: string;
  state: "pending" | "scheduled" | "closed";
  resulting_admission: string | null;
}

export interface Hospital {
  hospital_id: string;
  name: string;
  region: string;
}

export interface VisitSummary {
  visit_id: string;
  examination_type: string;
  date: string;
  doctor_name: string;
}

export interface Visit {
  visit_id: string;
  examination_type: string;
  date: string;
  doctor_id: string;
  complaints: string;
  diagnosis: string;
  symptoms: string[];
  treatments: { name: string; dosage: string }[];
  notes: string;
  vitals: Record<string, string>;
  attachments: { kind: string; storage_ref: string }[];
}

export interface ResolvedRecord {
  record: {
    record_id: string;
    patient_id: string;
    version: number;
  };
  conditions: { condition_id: string; name: string; chronic: boolean; onset_date: string | null; notes: string | null }[];
  medications: { medication_id: string; name: string; dosage: string; frequency: string; active: boolean }[];
  allergies: { allergy_id: string; allergen: string; category: string; severity: string }[];
  surgeries: { surgery_id: string; name: string; date: string; outcome: string | null }[];
  immunizations: { immunization_id: string; vaccine: string; date: string }[];
  lifestyle: { smoking: string; alcohol: string; exercise: string } | null;
  visits: Visit[];
}

export interface XrayResult {
  result_id: string;
  patient_id: string;
  image_ref: string;
  label: "Pneumonia" | "Normal";
  confidence: number;
  reviewer_verdict: "pending" | "confirmed" | "modified" | "overridden";
  reviewer_id: string | null;
  final_label: string | null;
}

export interface ChatSummary {
  conversation_id: string;
  first_turn_preview: string;
  created_at: string;
}

export interface ChatLog {
  conversation_id: string;
  doctor_id: string;
  turns: { author: "user" | "assistant"; content: string; at: string }[];
}

export interface SummaryResult {
  patient_id: string;
  summary_text: string;
  generated_at: string;
  source_record_version: number;
}

export interface MedicalReport {
  report_id: string;
  patient_id: string;
  visit_id: string;
  sections: Record<string, string>;
  storage_ref: string;
}

export interface ApiError {
  error_kind: string;
  detail: string;
  layer?: string;
}
