# Scenario loading and validation
