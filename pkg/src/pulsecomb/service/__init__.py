"""Service layer: request/response schemas, handlers and the HTTP app."""
