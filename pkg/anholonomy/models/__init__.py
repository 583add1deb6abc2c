# Report and configuration schemas
