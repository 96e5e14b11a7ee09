// All user-facing copy lives here so a future localization pass only touches
// this file.
export const STRINGS = {
  appTitle: "EHR Console",
  login: {
    heading: "Sign in",
    principal: "Principal id",
    role: "Role",
    submit: "Sign in",
  },
  admin: {
    heading: "Administration",
    registerPatient: "Register patient",
    nationalId: "National id (14 digits)",
    name: "Full name",
    contact: "Contact",
    admissionsBoard: "Admissions board",
    admit: "Admit",
    discharge: "Discharge",
    patientId: "Patient id",
    doctorId: "Doctor id",
    dataRequests: "Data-addition requests",
    forward: "Forward to doctor",
    examRequests: "Examination requests",
    schedule: "Schedule with doctor",
    doctorsAndAdmissions: "Doctors and admissions",
    patientsAndAdmissions: "Patients and admissions",
  },
  patient: {
    heading: "My health",
    examinations: "Examinations",
    history: "History",
    allergies: "Allergies",
    conditions: "Chronic conditions",
    surgeries: "Past surgeries",
    medications: "Current medications",
    immunizations: "Immunizations",
    none: "none",
    requestData: "Request data addition",
    dataType: "Data type",
    issuanceDate: "Issuance date",
    documentRef: "Supporting document",
    requestExam: "Request examination",
    examType: "Examination type",
    hospitals: "Hospitals",
    results: "Test and X-ray results",
    submit: "Submit",
    issuanceDateRequired: "Issuance date is required",
  },
  doctor: {
    heading: "Clinical workspace",
    assigned: "Assigned patients",
    openRecord: "Open record",
    newExamination: "New examination",
    summarize: "Summarize history",
    aiProvenance: "AI-generated - review required",
    report: "Generate report",
    xrayUpload: "Upload X-ray",
    confirm: "Confirm",
    modify: "Modify",
    override: "Override",
    chat: "Assistant chat",
    newChat: "New chat",
    send: "Send",
    addEntity: "Add",
    deleteEntity: "Delete",
  },
  errors: {
    accessDenied: "Access denied",
    conflict: "Conflict",
  },
} as const;
