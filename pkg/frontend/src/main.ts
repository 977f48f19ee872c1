import { ApiClient } from "./api";
import { mountApp } from "./app";
import "./style.css";

const api = new ApiClient("");
const controller = mountApp(document.getElementById("app")!, api, "tradebase");
void controller.init();
