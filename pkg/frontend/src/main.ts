import { HttpApi } from "./api";
import { clear, el, labeled } from "./dom";
import { STRINGS } from "./strings";
import type { Role, SessionState } from "./types";
import { renderAdminView } from "./views/admin";
import { renderDoctorView } from "./views/doctor";
import { renderPatientView } from "./views/patient";

const API_BASE = (import.meta as { env?: Record<string, string> }).env?.VITE_API_BASE ?? "";

export function mount(root: HTMLElement, api: HttpApi): void {
  renderLogin(root, api);
}

function renderLogin(root: HTMLElement, api: HttpApi): void {
  clear(root);
  const principal = el("input", { name: "principal_id" });
  const role = el("select", { name: "role" },
    ["patient", "doctor", "admin"].map((value) => el("option", { value }, [value])),
  );
  const error = el("p", { class: "inline-error", hidden: "true" });
  const form = el("form", { "data-form": "login" }, [
    el("h1", {}, [STRINGS.appTitle]),
    el("h2", {}, [STRINGS.login.heading]),
    labeled(STRINGS.login.principal, principal),
    labeled(STRINGS.login.role, role),
    error,
    el("button", { type: "submit" }, [STRINGS.login.submit]),
  ]);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      const token = await api.login(principal.value, role.value as Role);
      const session: SessionState = {
        token,
        role: role.value as Role,
        activeView: role.value as Role,  // the active view always matches the role
        principalId: principal.value,
      };
      await renderForSession(root, api, session);
    } catch (cause) {
      error.textContent = String(cause);
      error.hidden = false;
    }
  });
  root.append(form);
}

async function renderForSession(root: HTMLElement, api: HttpApi, session: SessionState): Promise<void> {
  clear(root);
  const bar = el("header", { class: "topbar" }, [
    el("span", {}, [`${session.principalId} (${session.role})`]),
  ]);
  const logout = el("button", { "data-action": "logout" }, ["Sign out"]);
  logout.addEventListener("click", () => {
    api.setToken(null);
    renderLogin(root, api);
  });
  bar.append(logout);
  const view = el("main", {});
  root.append(bar, view);
  if (session.activeView === "admin") {
    await renderAdminView(view, api);
  } else if (session.activeView === "doctor") {
    await renderDoctorView(view, api, session.principalId);
  } else {
    await renderPatientView(view, api, session.principalId);
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount(document.getElementById("app")!, new HttpApi(API_BASE));
}
