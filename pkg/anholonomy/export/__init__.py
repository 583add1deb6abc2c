# CSV and report writers
