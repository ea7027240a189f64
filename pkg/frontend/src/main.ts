import { ConsoleApp } from "./console.js";
import { mountConsole } from "./ui.js";

const root = document.getElementById("console");
if (root === null) throw new Error("missing #console element");
mountConsole(root, new ConsoleApp());
