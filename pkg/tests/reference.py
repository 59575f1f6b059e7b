"""Published component tables for the corpus charts.

Keys of the coefficient tables are ``(k, i, j)`` coordinate names for
Gamma^k_ij with i the direction slot.
"""

SCHWARZSCHILD_LC = {
    ("t", "t", "r"): "-m/(2*m*r - r^2)",
    ("r", "t", "t"): "-(2*m^2 - m*r)/r^3",
    ("r", "r", "r"): "m/(2*m*r - r^2)",
    ("r", "theta", "theta"): "2*m - r",
    ("phi", "theta", "phi"): "cos(theta)/sin(theta)",
    ("r", "phi", "phi"): "(2*m - r)*sin(theta)^2",
    ("theta", "r", "theta"): "1/r",
    ("theta", "phi", "phi"): "-cos(theta)*sin(theta)",
    ("phi", "r", "phi"): "1/r",
}

SCHWARZSCHILD_SSMC = {
    ("t", "t", "r"): "-m/(2*m*r - r^2)",
    ("t", "r", "t"): "-m/(2*m*r - r^2)",
    ("t", "r", "r"): "r/(2*m - r)",
    ("t", "theta", "theta"): "-r^2",
    ("t", "phi", "phi"): "-r^2*sin(theta)^2",
    ("r", "t", "t"): "-(2*m^2 - m*r)/r^3",
    ("r", "r", "t"): "(2*m - r)/r",
    ("r", "r", "r"): "m/(2*m*r - r^2)",
    ("r", "theta", "theta"): "2*m - r",
    ("r", "phi", "phi"): "(2*m - r)*sin(theta)^2",
    ("theta", "r", "theta"): "1/r",
    ("theta", "theta", "t"): "(2*m - r)/r",
    ("theta", "theta", "r"): "1/r",
    ("theta", "phi", "phi"): "-cos(theta)*sin(theta)",
    ("phi", "r", "phi"): "1/r",
    ("phi", "theta", "phi"): "cos(theta)/sin(theta)",
    ("phi", "phi", "t"): "(2*m - r)/r",
    ("phi", "phi", "r"): "1/r",
    ("phi", "phi", "theta"): "cos(theta)/sin(theta)",
}

SCHWARZSCHILD_SBAR = [
    ["0", "-m/r^2", "0", "0"],
    ["m/r^2", "1", "0", "0"],
    ["0", "0", "r^2 - 2*m*r", "0"],
    ["0", "0", "0", "-(2*m*r - r^2)*sin(theta)^2"],
]

KOTTLER_LC = {
    ("t", "t", "r"): "(Lambda*r^3 - 3*m)/(Lambda*r^4 + 6*m*r - 3*r^2)",
    ("r", "t", "t"): "(Lambda^2*r^6 + 3*Lambda*m*r^3 - 3*Lambda*r^4 - 18*m^2 + 9*m*r)/(9*r^3)",
    ("r", "r", "r"): "-(Lambda*r^3 - 3*m)/(Lambda*r^4 + 6*m*r - 3*r^2)",
    ("r", "theta", "theta"): "Lambda*r^3/3 + 2*m - r",
    ("r", "phi", "phi"): "(Lambda*r^3 + 6*m - 3*r)*sin(theta)^2/3",
    ("theta", "r", "theta"): "1/r",
    ("theta", "phi", "phi"): "-cos(theta)*sin(theta)",
    ("phi", "r", "phi"): "1/r",
    ("phi", "theta", "phi"): "cos(theta)/sin(theta)",
}

KOTTLER_SSMC = {
    ("t", "t", "r"): "(Lambda*r^3 - 3*m)/(Lambda*r^4 + 6*m*r - 3*r^2)",
    ("t", "r", "t"): "(Lambda*r^3 - 3*m)/(Lambda*r^4 + 6*m*r - 3*r^2)",
    ("t", "r", "r"): "3*r/(Lambda*r^3 + 6*m - 3*r)",
    ("t", "theta", "theta"): "-r^2",
    ("t", "phi", "phi"): "-r^2*sin(theta)^2",
    ("r", "t", "t"): "(Lambda^2*r^6 + 3*Lambda*m*r^3 - 3*Lambda*r^4 - 18*m^2 + 9*m*r)/(9*r^3)",
    ("r", "r", "t"): "(Lambda*r^3 + 6*m - 3*r)/(3*r)",
    ("r", "r", "r"): "-(Lambda*r^3 - 3*m)/(Lambda*r^4 + 6*m*r - 3*r^2)",
    ("phi", "phi", "theta"): "cos(theta)/sin(theta)",
    ("r", "theta", "theta"): "Lambda*r^3/3 + 2*m - r",
    ("r", "phi", "phi"): "(Lambda*r^3 + 6*m - 3*r)*sin(theta)^2/3",
    ("theta", "r", "theta"): "1/r",
    ("theta", "theta", "t"): "(Lambda*r^3 + 6*m - 3*r)/(3*r)",
    ("theta", "phi", "phi"): "-cos(theta)*sin(theta)",
    ("phi", "r", "phi"): "1/r",
    ("phi", "theta", "phi"): "cos(theta)/sin(theta)",
    ("phi", "phi", "t"): "(Lambda*r^3 + 6*m - 3*r)/(3*r)",
    ("phi", "phi", "r"): "1/r",
    ("theta", "theta", "r"): "1/r",
}

KOTTLER_SBAR = [
    [
        "-(Lambda^2*r^3 + 6*Lambda*m - 3*Lambda*r)/(3*r)",
        "(Lambda*r^3 - 3*m)/(3*r^2)",
        "0",
        "0",
    ],
    [
        "-(Lambda*r^3 - 3*m)/(3*r^2)",
        "(Lambda*r^3 + 3*(Lambda - 1)*r + 6*m)/(Lambda*r^3 + 6*m - 3*r)",
        "0",
        "0",
    ],
    ["0", "0", "-(Lambda*r^4 + 3*(Lambda - 1)*r^2 + 6*m*r)/3", "0"],
    ["0", "0", "0", "-(Lambda*r^4 + 3*(Lambda - 1)*r^2 + 6*m*r)*sin(theta)^2/3"],
]

EXAMPLE3_LC = {
    ("x1", "x1", "x1"): "1/2",
    ("x2", "x1", "x2"): "1/2",
    ("x2", "x2", "x1"): "1/2",
    ("x1", "x2", "x2"): "1/2",
}

EXAMPLE3_SSMC = {
    ("x1", "x1", "x1"): "1/2",
    ("x2", "x1", "x1"): "-exp(x1/2 - x2/2)",
    ("x3", "x1", "x1"): "-exp(x1)",
    ("x1", "x1", "x2"): "-exp(x1/2 - x2/2)",
    ("x2", "x1", "x2"): "1/2",
    ("x1", "x1", "x3"): "1",
    ("x2", "x2", "x3"): "1",
    ("x2", "x2", "x1"): "1/2 + exp(x1/2 - x2/2)",
    ("x1", "x2", "x2"): "1/2 + exp(x1/2 - x2/2)",
    ("x3", "x2", "x2"): "exp(x1)",
    ("x3", "x3", "x1"): "exp(x1/2 - x2/2)",
    ("x3", "x3", "x2"): "-exp(x1/2 - x2/2)",
    ("x1", "x3", "x3"): "-exp(-x1/2 - x2/2)",
    ("x2", "x3", "x3"): "-exp(-x1/2 - x2/2)",
}

# independent components, upper triangle
EXAMPLE3_SHAT = {
    ("x1", "x1"): "-exp(x1) + exp(x1 - x2)",
    ("x1", "x2"): "-exp(x1 - x2)",
    ("x1", "x3"): "exp(x1/2 - x2/2)",
    ("x2", "x2"): "exp(x1) + exp(x1 - x2)",
    ("x2", "x3"): "-exp(x1/2 - x2/2)",
    ("x3", "x3"): "0",
}
