import { mountApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8080";

mountApp(document, apiBase);
