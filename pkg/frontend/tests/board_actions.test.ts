// Admin board behaviors: actions must reflect the server verdict, never an
// optimistic guess, and server conflicts surface as toasts.

import { beforeEach, describe, expect, it } from "vitest";

import { renderAdminView } from "../src/views/admin";
import { FakeApi } from "./fake_api";

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app") as HTMLElement;
});

async function settle(): Promise<void> {
  // A macrotask boundary drains the handler's whole microtask chain
  // (API call plus rerender), however deep.
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe("admissions board", () => {
  it("discharging moves the row to the discharged state from the server", async () => {
    const api = new FakeApi();
    await renderAdminView(root, api);
    const row = root.querySelector('[data-admission="admission-1"]') as HTMLElement;
    (row.querySelector('[data-action="discharge"]') as HTMLButtonElement).click();
    await settle();
    const refreshed = root.querySelector('[data-admission="admission-1"]') as HTMLElement;
    expect(refreshed.querySelector('[data-state="discharged"]')).not.toBeNull();
    expect(refreshed.querySelector('[data-action="discharge"]')).toBeNull();
  });

  it("an admit conflict surfaces the server error as a toast", async () => {
    const api = new FakeApi();
    await renderAdminView(root, api);
    const form = root.querySelector('[data-form="admit"]') as HTMLFormElement;
    (form.querySelector('input[name="patient_id"]') as HTMLInputElement).value = "patient-1";
    (form.querySelector('input[name="doctor_id"]') as HTMLInputElement).value = "doctor-1";
    form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await settle();
    const toast = root.querySelector(".toast.error");
    expect(toast).not.toBeNull();
    expect(toast!.textContent).toContain("conflict");
  });

  it("forwarding a data request updates its state chip", async () => {
    const api = new FakeApi();
    await renderAdminView(root, api);
    const request = root.querySelector('[data-request="datareq-1"]') as HTMLElement;
    (request.querySelector('input[name="doctor_id"]') as HTMLInputElement).value = "doctor-1";
    (request.querySelector('[data-action="forward"]') as HTMLButtonElement).click();
    await settle();
    const refreshed = root.querySelector('[data-request="datareq-1"]') as HTMLElement;
    expect(refreshed.querySelector('[data-state="forwarded"]')).not.toBeNull();
  });

  it("scheduling an examination creates the admission on the board", async () => {
    const api = new FakeApi();
    await renderAdminView(root, api);
    const request = root.querySelector('[data-request="examreq-1"]') as HTMLElement;
    (request.querySelector('input[name="doctor_id"]') as HTMLInputElement).value = "doctor-2";
    (request.querySelector('[data-action="schedule"]') as HTMLButtonElement).click();
    await settle();
    expect(api.admissionsData.some((a) => a.doctor_id === "doctor-2" && a.state === "active")).toBe(true);
    const refreshed = root.querySelector('[data-request="examreq-1"]') as HTMLElement;
    expect(refreshed.querySelector('[data-state="scheduled"]')).not.toBeNull();
  });
});

describe("server as source of truth", () => {
  it("ui state after an action equals a fresh render", async () => {
    const api = new FakeApi();
    await renderAdminView(root, api);
    const row = root.querySelector('[data-admission="admission-1"]') as HTMLElement;
    (row.querySelector('[data-action="discharge"]') as HTMLButtonElement).click();
    await settle();
    const afterAction = root.innerHTML;
    const fresh = document.createElement("div");
    await renderAdminView(fresh, api);
    expect(afterAction).toBe(fresh.innerHTML);
  });
});
