# Schwinger field B0 in Tesla; beta = B / B0
SCHWINGER_FIELD_TESLA = 4.4e9


class KernelSign:
  PLUS = "+"
  MINUS = "-"

  @classmethod
  def all(cls):
    return [cls.PLUS, cls.MINUS]


class SeriesVariant:
  PLAIN = "plain"
  TILDE = "tilde"


class MomentMethod:
  DIRECT_SUM = "direct_sum"
  INTEGRAL = "integral"
