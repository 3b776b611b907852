import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    testTimeout: 30_000,
    hookTimeout: 30_000,
    // The round-trip suite drives one shared live service session; its tests
    // must run in declaration order within the single file (vitest default),
    // and files may run in parallel since each uses its own port/session.
  },
});
