"""
Settings, logging and run tracking for the denoising toolkit.

Logging Strategy:
- Console logging always; CloudWatch Logs only when IMPULSE_CLOUDWATCH_LOG_GROUP is set
- One JSON blob per run (run_id, command, per-stage latencies and counts)
- CloudWatch Metrics only when IMPULSE_PUBLISH_METRICS=true
"""

import json
import logging
import os
import uuid
import warnings

import boto3
import watchtower
from dotenv import load_dotenv

load_dotenv()

AWS_REGION = os.getenv("AWS_REGION", "us-east-1")
METRICS_NAMESPACE = os.getenv("IMPULSE_METRICS_NAMESPACE", "ImpulseDenoise")
CLOUDWATCH_LOG_GROUP = os.getenv("IMPULSE_CLOUDWATCH_LOG_GROUP", "")
PUBLISH_METRICS = os.getenv("IMPULSE_PUBLISH_METRICS", "false").lower() == "true"

# Published detector/restorer thresholds; env overrides feed the CLI defaults
ENTROPY_THRESHOLD = float(os.getenv("IMPULSE_ENTROPY_THRESHOLD", "6"))
CORRELATION_THRESHOLD = float(os.getenv("IMPULSE_CORRELATION_THRESHOLD", "8"))
MAX_ITERATIONS = int(os.getenv("IMPULSE_MAX_ITERATIONS", "256"))

warnings.filterwarnings("ignore", category=UserWarning, module="watchtower")

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

# ---------------------------
# Logging Setup (Console + optional CloudWatch)
# ---------------------------
if not getattr(logging.root, "_impulse_configured", False):
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s | %(name)s | %(levelname)s | %(message)s")

    logging.getLogger("botocore").setLevel(logging.WARNING)
    logging.getLogger("urllib3").setLevel(logging.WARNING)

    if CLOUDWATCH_LOG_GROUP:
        try:
            cloudwatch_handler = watchtower.CloudWatchLogHandler(
                log_group_name=CLOUDWATCH_LOG_GROUP,
                log_stream_name="denoise-{strftime:%Y-%m-%d}",
                boto3_client=boto3.client("logs", region_name=AWS_REGION),
                create_log_group=True,
                use_queues=False,
            )
            logging.root.addHandler(cloudwatch_handler)
        except Exception:
            pass  # No credentials or AWS unavailable: console logging only
    logging.root._impulse_configured = True


def get_logger(name: str):
    """Get a logger - inherits the CloudWatch handler from root when configured."""
    return logging.getLogger(name)


def generate_run_id() -> str:
    """Generate a unique run ID for tracing."""
    return f"run_{uuid.uuid4().hex[:12]}"


# ---------------------------
# Run Context (single JSON blob per run)
# ---------------------------
_run_context = {}


def start_run(run_id: str, command: str, **fields):
    """Start collecting events for a run."""
    _run_context[run_id] = {"run_id": run_id, "command": command, "stage_flow": [], **fields}


def add_event(run_id: str, **kwargs):
    """Add event data to the run context."""
    if run_id not in _run_context:
        return
    ctx = _run_context[run_id]

    if "stage" in kwargs:
        stage = kwargs.pop("stage")
        ctx["stage_flow"].append(stage)
        if "stage_metrics" in kwargs:
            ctx.setdefault("stages", {})[stage] = kwargs.pop("stage_metrics")

    ctx.update(kwargs)


def end_run(run_id: str, status: str = "success"):
    """Log the complete run as one JSON blob and clean up."""
    if run_id not in _run_context:
        return
    ctx = _run_context.pop(run_id)
    ctx["status"] = status
    get_logger("run").info(json.dumps(ctx, default=str))


def log_stage_metrics(stage: str, latency_sec: float, **values):
    """
    Send numerical stage metrics to CloudWatch Metrics.

    No-op unless IMPULSE_PUBLISH_METRICS=true.
    """
    if not PUBLISH_METRICS:
        return
    dimensions = [{"Name": "Stage", "Value": stage}]
    metric_data = [{"MetricName": "Latency", "Value": latency_sec, "Unit": "Seconds", "Dimensions": dimensions}]
    for name, value in values.items():
        metric_data.append({"MetricName": name, "Value": float(value), "Unit": "Count", "Dimensions": dimensions})
    try:
        boto3.client("cloudwatch", region_name=AWS_REGION).put_metric_data(
            Namespace=METRICS_NAMESPACE, MetricData=metric_data
        )
    except Exception as e:
        get_logger("config").warning(f"Failed to publish metrics for {stage}: {e}")
