from semiquasi.expr import add, is_zero, mul, normalize, parse


def expr(chart, text):
    return normalize(parse(text, chart.symbols))


def same(chart, e, expected, config=None):
    if isinstance(expected, str):
        expected = expr(chart, expected)
    return is_zero(add(e, mul(-1, expected)), config=config or chart.zero_config()).is_zero


def table_mismatches(chart, tensor, table):
    """Keys of ``table`` whose component in ``tensor`` differs from the listed value."""
    index = {name: i for i, name in enumerate(chart.coordinates)}
    return [key for key, text in table.items() if not same(chart, tensor[tuple(index[k] for k in key)], text)]


def matrix_mismatches(chart, tensor, rows):
    n = chart.dim
    return [(i, j) for i in range(n) for j in range(n) if not same(chart, tensor[i, j], rows[i][j])]


def nonzero_keys(chart, tensor):
    names = chart.coordinates
    return {tuple(names[i] for i in idx) for idx, e in tensor.items() if not e.is_zero_constant()}
