class KahanSummation:
    """Running sum with a compensation term for lost low-order bits."""

    def __init__(self):
        self.sum = 0.0
        self.carry = 0.0

    def add(self, value):
        value -= self.carry
        previous_sum = self.sum
        self.sum += value
        self.carry = (self.sum - previous_sum) - value
        return self.sum

    def extend(self, values):
        for v in values:
            self.add(v)
        return self.sum

    def __float__(self):
        return self.sum


def kahan_sum(values):
    acc = KahanSummation()
    return acc.extend(values)
