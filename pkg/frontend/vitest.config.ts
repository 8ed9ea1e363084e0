import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['tests/**/*.test.ts'],
    // The session-fidelity suite spawns a real service process and drives a
    // scripted session over HTTP, so individual tests need generous timeouts.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
