"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class RelSerreError(Exception):
    exit_code = 1


class ParseError(RelSerreError, ValueError):
    exit_code = 2


class InconsistencyError(RelSerreError):
    exit_code = 3


class DataIntegrityError(InconsistencyError):
    pass


class AmbiguityError(RelSerreError):
    exit_code = 4


class ResourceCapError(RelSerreError):
    exit_code = 5


class ModulusMismatchError(RelSerreError, ValueError):
    exit_code = 2


class NonInvertibleError(RelSerreError, ValueError):
    exit_code = 2
