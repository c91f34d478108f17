"""Exception types raised across the package."""


class QudisimError(Exception):
    """Base class for all qudisim errors."""


class InvalidArguments(QudisimError):
    """An argument violates a precondition (bad wire index, count, range)."""


class DigitOutOfRange(QudisimError):
    """A digit is >= its wire's dimension."""


class IndexOutOfRange(QudisimError):
    """A flat index is >= the register's total dimension."""


class DimensionTooLarge(QudisimError):
    """The requested state or matrix exceeds the addressable-size cap."""


class ShapeMismatch(QudisimError):
    """A matrix or vector shape does not match the wires it targets."""


class NotUnitary(QudisimError):
    """A supplied matrix fails the unitarity check."""


class UnsupportedDimension(QudisimError):
    """A gate constructor only supports dimensions 2 and 3."""


class InvalidControlState(QudisimError):
    """A control activation digit is >= the control wire's dimension."""


class InvalidFlipVariant(QudisimError):
    """An X-gate variant is not defined for the target dimension."""


class StrategyInapplicable(QudisimError):
    """The chosen lowering strategy does not apply to this control mix."""


class TooFewControls(QudisimError):
    """Lowering requires at least two controls."""


class InvalidDimension(QudisimError):
    """A noise channel dimension is unsupported."""


class InvalidStrength(QudisimError):
    """A noise strength lies outside [0, 1]."""


class ValueOutOfRange(QudisimError):
    """An intensity value lies outside 0..255."""


class InvalidDims(QudisimError):
    """Image dimensions fit none of the accepted radix patterns."""


class LayoutMismatch(QudisimError):
    """A circuit or histogram does not match the expected register layout."""


class TransformOutOfRange(QudisimError):
    """A channel transform produced a value outside 0..255."""


class NoiseOnUnloweredCircuit(QudisimError):
    """Noise requires an elementary (one- and two-wire gate) circuit."""


class IncompleteDecode(QudisimError):
    """Decoding could not populate every pixel channel above threshold."""


class PpmError(QudisimError):
    """A PPM file is malformed or uses an unsupported variant."""
