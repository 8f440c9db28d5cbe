/* Intentionally exports nothing. */
