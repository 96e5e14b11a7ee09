// End-to-end against the real backend: spawn the Python server, then drive
// admit -> examine -> discharge -> denied access through the HttpApi client,
// observing the revocation exactly as the console would.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { HttpApi, RequestFailed } from "../src/api";

const PORT = 8977;
const BASE = `http://127.0.0.1:${PORT}`;

let backend: ChildProcess;

async function waitForBackend(): Promise<void> {
  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error("backend did not become ready");
}

beforeAll(async () => {
  backend = spawn(
    "python3",
    ["-m", "ehrkit.http.serve", "--port", String(PORT), "--demo"],
    { stdio: "ignore" },
  );
  await waitForBackend();
}, 25000);

afterAll(() => {
  backend.kill("SIGTERM");
});

describe("admit -> examine -> discharge -> denied", () => {
  it("observes access revocation end to end", async () => {
    const admin = new HttpApi(BASE);
    await admin.login("admin-1", "admin");

    // Register a fresh patient and admit the demo doctor to them.
    const patientId = await admin.registerPatient({
      national_id: "38888888888888",
      name: "E2E Patient",
    });
    const admission = await admin.admit(patientId, "doctor-1");
    expect(admission.state).toBe("active");

    // The doctor examines: creates the record and logs a visit.
    const doctor = new HttpApi(BASE);
    await doctor.login("doctor-1", "doctor");
    await doctor.createRecord(patientId);
    const visitId = await doctor.createVisit(patientId, {
      examination_type: "routine",
      date: "2024-06-01",
      complaints: "checkup",
      diagnosis: "healthy",
    });
    expect(visitId).toBeTruthy();

    // While admitted, the record is readable.
    const record = await doctor.record(patientId);
    expect(record.record.patient_id).toBe(patientId);
    expect(record.visits).toHaveLength(1);

    // The administrator discharges; access is revoked.
    const discharged = await admin.discharge(admission.admission_id);
    expect(discharged.state).toBe("discharged");

    let denied: RequestFailed | null = null;
    try {
      await doctor.record(patientId);
    } catch (error) {
      if (error instanceof RequestFailed) denied = error;
    }
    expect(denied).not.toBeNull();
    expect(denied!.status).toBe(403);
    expect(denied!.body.error_kind).toBe("access_denied");
    expect(denied!.body.layer).toBe("access_control");
  }, 30000);

  it("the demo doctor can run the AI summarize path over HTTP", async () => {
    const doctor = new HttpApi(BASE);
    await doctor.login("doctor-1", "doctor");
    const summary = await doctor.summarize("patient-1");
    expect(summary.summary_text).toContain("covered sections");
    const record = await doctor.record("patient-1");
    const report = await doctor.report("patient-1", record.visits[0].visit_id);
    expect(Object.keys(report.sections)).toEqual([
      "patient_information",
      "visit_summary",
      "diagnosis_and_treatment",
      "vitals_and_lab_results",
      "ai_recommendations",
    ]);
  }, 30000);

  it("patients cannot reach another patient's record", async () => {
    const patient = new HttpApi(BASE);
    await patient.login("patient-1", "patient");
    const own = await patient.record("patient-1");
    expect(own.record.patient_id).toBe("patient-1");

    const admin = new HttpApi(BASE);
    await admin.login("admin-1", "admin");
    const otherId = await admin.registerPatient({
      national_id: "37777777777777",
      name: "Other",
    });
    let denied: RequestFailed | null = null;
    try {
      await patient.record(otherId);
    } catch (error) {
      if (error instanceof RequestFailed) denied = error;
    }
    expect(denied?.status).toBe(403);
  }, 30000);
});
