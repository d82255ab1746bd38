import { createApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  // point the dashboard elsewhere with ?api=http://host:port
  const baseUrl = new URLSearchParams(location.search).get("api") ?? "";
  createApp(root, { baseUrl });
}
