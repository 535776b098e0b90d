import { mount } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const endpoint = root.dataset.endpoint ?? window.location.origin;
  mount(root, endpoint);
}
