import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'happy-dom',
    include: ['tests/**/*.spec.ts'],
    // the parity suite drives a real campaign through the HTTP service
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
