from src.workflow.pipeline import build_graph, run_verification
