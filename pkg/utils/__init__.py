# Logging, validation and parallel helpers
