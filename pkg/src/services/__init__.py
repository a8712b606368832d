# Document loading, command handlers and the self-test suite
