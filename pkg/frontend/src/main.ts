/** Browser entry point: mount the app, wire the settings strip and the
 * focus menu, and load everything from the API on the same origin.
 */

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import type { ColorMode } from "./encoding.js";

function buildSettings(app: App, root: HTMLElement): void {
  const doc = root.ownerDocument;
  const bar = doc.createElement("div");
  bar.className = "settings";

  const colorSelect = doc.createElement("select");
  for (const mode of ["latentPosition", "nodeType", "feature", "predictedLabel", "correctness"]) {
    const option = doc.createElement("option");
    option.value = mode;
    option.textContent = `color: ${mode}`;
    colorSelect.appendChild(option);
  }
  colorSelect.addEventListener("change", () => {
    app.setColorMode(colorSelect.value as ColorMode, colorSelect.value === "feature" ? 0 : null);
  });
  bar.appendChild(colorSelect);

  const hoverSelect = doc.createElement("select");
  for (const depth of [0, 1, 2, 3]) {
    const option = doc.createElement("option");
    option.value = String(depth);
    option.textContent = `hover neighbors: ${depth} hops`;
    hoverSelect.appendChild(option);
  }
  hoverSelect.addEventListener("change", () =>
    app.dispatch({ type: "setHoverDepth", depth: Number(hoverSelect.value) }),
  );
  bar.appendChild(hoverSelect);

  const bundling = doc.createElement("button");
  bundling.textContent = "toggle bundling";
  bundling.addEventListener("click", async () => {
    const enabled = !app.state.bundling;
    app.dispatch({ type: "setBundling", enabled });
    await app.api.postSettings({ edgeBundling: enabled });
  });
  bar.appendChild(bundling);

  // the focus menu: visible only while nodes are selected
  const menu = doc.createElement("div");
  menu.className = "focus-menu";
  for (const [label, kind] of [
    ["focus: new group", "createNew"],
    ["add to foc-0", "addTo"],
    ["clear focus", "clear"],
  ] as const) {
    const button = doc.createElement("button");
    button.textContent = label;
    button.addEventListener("click", () => {
      const action =
        kind === "clear"
          ? { kind }
          : kind === "addTo"
            ? { kind, nodeIds: app.state.selection, group: 0 }
            : { kind, nodeIds: app.state.selection };
      app.focus(action).catch((err) => console.error("focus failed:", err));
    });
    menu.appendChild(button);
  }
  const sync = () => {
    menu.style.display = app.state.focusMenuVisible ? "block" : "none";
    requestAnimationFrame(sync);
  };
  requestAnimationFrame(sync);
  bar.appendChild(menu);
  root.prepend(bar);
}

export async function bootstrap(): Promise<App> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const app = new App(new ApiClient(""), root);
  buildSettings(app, root);
  await app.load();
  return app;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void bootstrap();
}
