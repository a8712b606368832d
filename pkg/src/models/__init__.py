# Document and report schemas
