import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "happy-dom",
    globalSetup: "./tests/service.setup.ts",
    testTimeout: 20000,
    hookTimeout: 60000,
  },
});
