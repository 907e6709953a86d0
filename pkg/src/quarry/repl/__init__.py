"""Interactive shell for package discovery, snippet reuse, and evaluation."""

from .environment import (EnvironmentError_, EnvironmentLost, InstallResult,
                          ReplEnvironment, create_environment,
                          run_package_manager)
from .io import TerminalIO, TranscriptIO
from .sandbox import (EvalResult, SandboxClient, SandboxCrashed, SandboxError,
                      SandboxTimeout)
from .shell import (HELP_TEXT, ReplShell, ShellConfig, needs_continuation,
                    run_transcript)

__all__ = [
    "EnvironmentError_", "EnvironmentLost", "EvalResult", "HELP_TEXT",
    "InstallResult", "ReplEnvironment", "ReplShell", "SandboxClient",
    "SandboxCrashed", "SandboxError", "SandboxTimeout", "ShellConfig",
    "TerminalIO", "TranscriptIO", "create_environment", "needs_continuation",
    "run_package_manager", "run_transcript",
]
