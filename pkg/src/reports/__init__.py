from src.reports.writer import RunClock, envelope, to_json, write_json
