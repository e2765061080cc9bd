"""Exception hierarchy shared by all modules.

Configuration problems derive from :class:`ConfigError` (CLI exit code 2),
numerical breakdowns from :class:`NumericalError` (CLI exit code 3).
"""


class ADMError(Exception):
    pass


class ConfigError(ADMError, ValueError):
    """Invalid parameter, input vector or observation."""


class InsufficientReceptorsError(ConfigError):
    pass


class InconsistentCountsError(ConfigError):
    pass


class DegenerateChannelError(ConfigError):
    """Total concentration is zero, so ligand ratios are undefined."""


class TooManyChannelsError(ConfigError):
    pass


class NumericalError(ADMError, ArithmeticError):
    pass


class IllConditionedError(NumericalError):
    def __init__(self, gamma, M, condition_number, ceiling):
        self.gamma = gamma
        self.M = M
        self.condition_number = condition_number
        super().__init__(
            f"separation matrix is ill-conditioned (cond={condition_number:.3e} > {ceiling:.1e}) "
            f"for gamma={gamma}, M={M}; increase gamma or reduce M"
        )


class NonSeparableSymbolsError(NumericalError):
    pass


class InvalidMomentsError(NumericalError):
    pass
