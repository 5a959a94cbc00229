"""Pure-Python integration kernels.

Reference implementation of the hot loops; the compiled extension in
``frontlab._kernels`` mirrors this module exactly.  Selected by
``frontlab._backend`` when the extension is unavailable or when
``FRONTLAB_BACKEND=python`` is set.
"""

import math

import numpy as np

BACKEND_NAME = "python"

# shoot_core status codes (shared with the compiled kernel)
STATUS_NEAR_P2 = 0
STATUS_OVERSHOOT = 1
STATUS_XMAX = 2
STATUS_ARC_CAP = 3
STATUS_STEP_UNDERFLOW = 4
STATUS_AXIS_INNER = 5
STATUS_MAX_STEPS = 6
STATUS_YAXIS = 7
STATUS_BACKWARD_AXIS = 8

# distances from P2 at which the approach slope is sampled; the slope
# extrapolated linearly to distance zero discriminates the tangent
# eigendirection without curvature bias
_SLOPE_D1 = 2e-4
_SLOPE_D2 = 1e-4


def _rhs(n, p, q, k, c, x, y):
    # state clamped to X >= 0 so real exponents never see a negative base
    if x > 0.0:
        xq = x ** q
        xp = x ** p
        xn1 = x ** (n - 1.0)
    else:
        xq = 0.0
        xp = 0.0
        xn1 = 1.0 if n == 1.0 else 0.0
    return y, c * y - k * n * xn1 * y - xp + xq


def _hermite(y0, f0, y1, f1, h, t):
    t2 = t * t
    t3 = t2 * t
    return ((2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * h * f0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * f1)


def _bisect_component(y0, f0, y1, f1, h, level, comp):
    """Root of the cubic Hermite interpolant of component `comp` minus `level`.

    Returns tau in [0, 1]; the caller guarantees a sign change across the step.
    """
    a, b = 0.0, 1.0
    va = _hermite(y0[comp], f0[comp], y1[comp], f1[comp], h, a) - level
    for _ in range(200):
        m = 0.5 * (a + b)
        vm = _hermite(y0[comp], f0[comp], y1[comp], f1[comp], h, m) - level
        if va * vm <= 0.0:
            b = m
        else:
            a = m
            va = vm
        if (b - a) * abs(h) < 1e-13 * max(1.0, abs(h)):
            break
    return 0.5 * (a + b)


# Dormand-Prince 5(4) tableau
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)


def shoot_core(n, p, q, k, c, x0, y0, rtol, atol, max_step,
               eps_p2, x_max, arc_cap, max_steps, forward):
    """Integrate the phase-plane system until a terminal event.

    Returns (status, xi, X, Y, ev, cross1, slope_samples) where xi/X/Y are
    arrays of accepted states ending at the localized terminal point, ev is
    the terminal (xi, X, Y), cross1 is the localized X=1 crossing
    (xi, Y) or (nan, nan), and slope_samples holds (X, Y) at the first
    crossings of two distance thresholds from P2 (nan-filled if not seen).
    """
    sign = 1.0 if forward else -1.0
    xi = 0.0
    x, y = x0, y0
    fx, fy = _rhs(n, p, q, k, c, x, y)

    xs = [xi]
    Xs = [x]
    Ys = [y]
    cross1_xi = math.nan
    cross1_y = math.nan
    s1x = s1y = s2x = s2y = math.nan
    arc = 0.0

    h = min(1e-4, max_step)
    status = STATUS_MAX_STEPS
    ev = (xi, x, y)
    steps = 0
    while steps < max_steps:
        steps += 1
        if h < 1e-14 * max(1.0, abs(xi)):
            status = STATUS_STEP_UNDERFLOW
            ev = (xi, x, y)
            break

        hs = sign * h
        k1x, k1y = fx, fy
        ax = x + hs * _A21 * k1x
        ay = y + hs * _A21 * k1y
        k2x, k2y = _rhs(n, p, q, k, c, ax, ay)
        ax = x + hs * (_A31 * k1x + _A32 * k2x)
        ay = y + hs * (_A31 * k1y + _A32 * k2y)
        k3x, k3y = _rhs(n, p, q, k, c, ax, ay)
        ax = x + hs * (_A41 * k1x + _A42 * k2x + _A43 * k3x)
        ay = y + hs * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        k4x, k4y = _rhs(n, p, q, k, c, ax, ay)
        ax = x + hs * (_A51 * k1x + _A52 * k2x + _A53 * k3x + _A54 * k4x)
        ay = y + hs * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        k5x, k5y = _rhs(n, p, q, k, c, ax, ay)
        ax = x + hs * (_A61 * k1x + _A62 * k2x + _A63 * k3x + _A64 * k4x
                       + _A65 * k5x)
        ay = y + hs * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y
                       + _A65 * k5y)
        k6x, k6y = _rhs(n, p, q, k, c, ax, ay)
        x1 = x + hs * (_B1 * k1x + _B3 * k3x + _B4 * k4x + _B5 * k5x
                       + _B6 * k6x)
        y1 = y + hs * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y
                       + _B6 * k6y)
        k7x, k7y = _rhs(n, p, q, k, c, x1, y1)

        errx = hs * (_E1 * k1x + _E3 * k3x + _E4 * k4x + _E5 * k5x
                     + _E6 * k6x + _E7 * k7x)
        erry = hs * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y
                     + _E6 * k6y + _E7 * k7y)
        scx = atol + rtol * max(abs(x), abs(x1))
        scy = atol + rtol * max(abs(y), abs(y1))
        err = math.sqrt(0.5 * ((errx / scx) ** 2 + (erry / scy) ** 2))
        if not math.isfinite(err):
            err = 2.0

        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            continue

        # step accepted: event checks, earliest event in the step wins
        yv0 = (x, y)
        fv0 = (k1x, k1y)
        yv1 = (x1, y1)
        fv1 = (k7x, k7y)

        if forward and y1 <= 0.0 and y > 0.0:
            tau = _bisect_component(yv0, fv0, yv1, fv1, hs, 0.0, 1)
            xc = _hermite(x, k1x, x1, k7x, hs, tau)
            xic = xi + hs * tau
            status = STATUS_OVERSHOOT if xc > 1.0 else STATUS_AXIS_INNER
            ev = (xic, xc, 0.0)
            break
        if (not forward) and y1 <= 0.0 and y > 0.0 and x1 > 0.0:
            status = STATUS_BACKWARD_AXIS
            ev = (xi + hs, x1, y1)
            break
        if (not forward) and x1 <= 0.0:
            tau = _bisect_component(yv0, fv0, yv1, fv1, hs, 0.0, 0)
            yc = _hermite(y, k1y, y1, k7y, hs, tau)
            xic = xi + hs * tau
            status = STATUS_YAXIS
            ev = (xic, 0.0, yc)
            break

        if forward and math.isnan(cross1_xi) and x < 1.0 <= x1:
            tau = _bisect_component(yv0, fv0, yv1, fv1, hs, 1.0, 0)
            cross1_xi = xi + hs * tau
            cross1_y = _hermite(y, k1y, y1, k7y, hs, tau)

        d = math.hypot(x1 - 1.0, y1)
        if forward:
            if math.isnan(s1x) and d <= _SLOPE_D1:
                s1x, s1y = x1, y1
            if math.isnan(s2x) and d <= _SLOPE_D2:
                s2x, s2y = x1, y1
            if d < eps_p2:
                status = STATUS_NEAR_P2
                ev = (xi + hs, x1, y1)
                xi += hs
                x, y = x1, y1
                xs.append(xi)
                Xs.append(x)
                Ys.append(y)
                break

        arc += math.hypot(x1 - x, y1 - y)
        xi += hs
        x, y = x1, y1
        fx, fy = k7x, k7y
        xs.append(xi)
        Xs.append(x)
        Ys.append(y)

        if forward and x > x_max:
            status = STATUS_XMAX
            ev = (xi, x, y)
            break
        if arc > arc_cap:
            status = STATUS_ARC_CAP
            ev = (xi, x, y)
            break

        h = min(max_step, h * min(5.0, max(0.2, 0.9 * err ** -0.2
                                           if err > 0.0 else 5.0)))
    else:
        ev = (xi, x, y)

    if status in (STATUS_OVERSHOOT, STATUS_AXIS_INNER, STATUS_YAXIS):
        xs.append(ev[0])
        Xs.append(ev[1])
        Ys.append(ev[2])

    return (status,
            np.asarray(xs), np.asarray(Xs), np.asarray(Ys),
            ev, (cross1_xi, cross1_y),
            (s1x, s1y, s2x, s2y))


def pde_advance(u, dx, dt, steps, n, p, q, k):
    """Advance the method-of-lines system `steps` Heun steps in place.

    Boundary nodes are pinned (Dirichlet).  Returns (umin, umax) seen over
    all completed steps; the caller enforces the admissible range.
    """
    inv_dx2 = 1.0 / (dx * dx)
    inv_2dx = 1.0 / (2.0 * dx)
    umin = float(u.min())
    umax = float(u.max())

    def rhs(w):
        wc = np.clip(w, 0.0, None)
        flux = wc ** n
        r = np.zeros_like(w)
        r[1:-1] = ((w[2:] - 2.0 * w[1:-1] + w[:-2]) * inv_dx2
                   + k * (flux[2:] - flux[:-2]) * inv_2dx
                   + wc[1:-1] ** p - wc[1:-1] ** q)
        return r

    for _ in range(steps):
        r0 = rhs(u)
        u1 = u + dt * r0
        u += 0.5 * dt * (r0 + rhs(u1))
        umin = min(umin, float(u.min()))
        umax = max(umax, float(u.max()))
    return umin, umax
