"""Services package - Business logic orchestration."""
