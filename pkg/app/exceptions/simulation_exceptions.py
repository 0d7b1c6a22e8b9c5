class SimulationError(Exception):
    def __init__(self, message="Simulation failed"):
        self.message = message
        super().__init__(self.message)


class ConfigurationError(SimulationError):
    def __init__(
        self,
        message="Invalid scenario configuration",
        key: str | None = None,
        line: int | None = None,
    ):
        self.key = key
        self.line = line
        location = ""
        if key is not None:
            location = f"{key}"
            if line is not None:
                location += f" (line {line})"
            location += ": "
        super().__init__(f"{location}{message}")


class StructuralError(SimulationError):
    def __init__(self, message="Malformed structure"):
        super().__init__(message)


class NoRouteError(SimulationError):
    def __init__(self, message="No route to destination", device: int | None = None):
        self.device = device
        super().__init__(message)


class OutputPathError(SimulationError):
    def __init__(self, message="Output path is not writable"):
        super().__init__(message)
