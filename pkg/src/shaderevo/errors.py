"""Exception taxonomy shared by all shaderevo modules."""


class ShaderEvoError(Exception):
    """Base class for every error raised by this package."""


class UnknownKind(ShaderEvoError):
    pass


class UnknownNode(ShaderEvoError):
    pass


class UnknownSlot(ShaderEvoError):
    pass


class IncompatibleDimensions(ShaderEvoError):
    pass


class WouldCycle(ShaderEvoError):
    pass


class TypeMismatch(ShaderEvoError):
    pass


class CannotRemoveMaster(ShaderEvoError):
    pass


class CyclicGraph(ShaderEvoError):
    pass


class InvalidGenome(ShaderEvoError):
    """Raised when an operation requires a genome that validates and it does not."""


class UnsupportedGenome(ShaderEvoError):
    pass


class NoCompatibleSlot(ShaderEvoError):
    pass


class IdenticalParents(ShaderEvoError):
    pass


class TooManySeeds(ShaderEvoError):
    pass


class UnknownIndividual(ShaderEvoError):
    pass


class ParseError(ShaderEvoError):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(ShaderEvoError):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class VersionError(ShaderEvoError):
    pass


class StorageFailure(ShaderEvoError):
    pass


class ManifestMismatch(ShaderEvoError):
    pass
