import { defineConfig } from "vitest/config";

export default defineConfig({
  base: "./",
  server: {
    proxy: {
      // dev mode proxies the lifecycle API served by `zkaccess serve`
      "/v1": "http://127.0.0.1:8799",
    },
  },
  test: {
    environment: "happy-dom",
    exclude: process.env.RUN_E2E
      ? ["node_modules/**"]
      : ["node_modules/**", "test/e2e.test.ts"],
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
