import { mount } from "./app.js";

const root = document.getElementById("app");
if (root !== null) {
  mount(root);
}
