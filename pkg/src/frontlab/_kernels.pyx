# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integration kernels.

Mirrors ``frontlab._kernels_py`` exactly; see that module for the reference
implementation and documentation of the return conventions.
"""

from libc.math cimport fabs, hypot, isfinite, isnan, pow, sqrt, NAN

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"

STATUS_NEAR_P2 = 0
STATUS_OVERSHOOT = 1
STATUS_XMAX = 2
STATUS_ARC_CAP = 3
STATUS_STEP_UNDERFLOW = 4
STATUS_AXIS_INNER = 5
STATUS_MAX_STEPS = 6
STATUS_YAXIS = 7
STATUS_BACKWARD_AXIS = 8

cdef double _SLOPE_D1 = 2e-4
cdef double _SLOPE_D2 = 1e-4


cdef inline double _ipow(double x, long e) nogil:
    cdef double r = 1.0
    cdef double b = x
    while e > 0:
        if e & 1:
            r *= b
        b *= b
        e >>= 1
    return r


cdef inline double _rpow(double x, double e, long ei, bint integral) nogil:
    if integral:
        return _ipow(x, ei)
    return pow(x, e)


cdef struct Params:
    double n, p, q, k, c
    long ni, pi, qi           # integer exponents (n-1, p, q) when integral
    bint n_int, p_int, q_int


cdef inline void _rhs(Params *P, double x, double y,
                      double *fx, double *fy) nogil:
    cdef double xq, xp, xn1
    if x > 0.0:
        xq = _rpow(x, P.q, P.qi, P.q_int)
        xp = _rpow(x, P.p, P.pi, P.p_int)
        xn1 = _rpow(x, P.n - 1.0, P.ni, P.n_int)
    else:
        xq = 0.0
        xp = 0.0
        xn1 = 1.0 if P.n == 1.0 else 0.0
    fx[0] = y
    fy[0] = P.c * y - P.k * P.n * xn1 * y - xp + xq


cdef inline double _hermite(double y0, double f0, double y1, double f1,
                            double h, double t) nogil:
    cdef double t2 = t * t
    cdef double t3 = t2 * t
    return ((2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * h * f0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * h * f1)


cdef double _bisect(double y0, double f0, double y1, double f1,
                    double h, double level) nogil:
    cdef double a = 0.0, b = 1.0, m, va, vm
    cdef int i
    va = _hermite(y0, f0, y1, f1, h, a) - level
    for i in range(200):
        m = 0.5 * (a + b)
        vm = _hermite(y0, f0, y1, f1, h, m) - level
        if va * vm <= 0.0:
            b = m
        else:
            a = m
            va = vm
        if (b - a) * fabs(h) < 1e-13 * max(1.0, fabs(h)):
            break
    return 0.5 * (a + b)


cdef inline bint _is_integral(double e, double cap=64.5):
    return e == <double><long>e and 0.0 <= e <= cap


def shoot_core(double n, double p, double q, double k, double c,
               double x0, double y0, double rtol, double atol,
               double max_step, double eps_p2, double x_max,
               double arc_cap, long max_steps, bint forward):
    cdef Params P
    P.n = n; P.p = p; P.q = q; P.k = k; P.c = c
    P.n_int = _is_integral(n - 1.0)
    P.p_int = _is_integral(p)
    P.q_int = _is_integral(q)
    P.ni = <long>(n - 1.0) if P.n_int else 0
    P.pi = <long>p if P.p_int else 0
    P.qi = <long>q if P.q_int else 0

    cdef double sign = 1.0 if forward else -1.0
    cdef double xi = 0.0, x = x0, y = y0
    cdef double fx, fy
    _rhs(&P, x, y, &fx, &fy)

    xs_l = [0.0]
    Xs_l = [x]
    Ys_l = [y]
    cdef double cross1_xi = NAN, cross1_y = NAN
    cdef double s1x = NAN, s1y = NAN, s2x = NAN, s2y = NAN
    cdef double arc = 0.0
    cdef double h = min(1e-4, max_step)
    cdef int status = STATUS_MAX_STEPS
    cdef double ev_xi = xi, ev_x = x, ev_y = y
    cdef long steps = 0

    cdef double hs, ax, ay
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y
    cdef double k5x, k5y, k6x, k6y, k7x, k7y
    cdef double x1, y1, errx, erry, scx, scy, err, tau, xc, yc, xic, d

    while steps < max_steps:
        steps += 1
        if h < 1e-14 * max(1.0, fabs(xi)):
            status = STATUS_STEP_UNDERFLOW
            ev_xi = xi; ev_x = x; ev_y = y
            break

        hs = sign * h
        k1x = fx; k1y = fy
        ax = x + hs * 0.2 * k1x
        ay = y + hs * 0.2 * k1y
        _rhs(&P, ax, ay, &k2x, &k2y)
        ax = x + hs * (3.0 / 40.0 * k1x + 9.0 / 40.0 * k2x)
        ay = y + hs * (3.0 / 40.0 * k1y + 9.0 / 40.0 * k2y)
        _rhs(&P, ax, ay, &k3x, &k3y)
        ax = x + hs * (44.0 / 45.0 * k1x - 56.0 / 15.0 * k2x
                       + 32.0 / 9.0 * k3x)
        ay = y + hs * (44.0 / 45.0 * k1y - 56.0 / 15.0 * k2y
                       + 32.0 / 9.0 * k3y)
        _rhs(&P, ax, ay, &k4x, &k4y)
        ax = x + hs * (19372.0 / 6561.0 * k1x - 25360.0 / 2187.0 * k2x
                       + 64448.0 / 6561.0 * k3x - 212.0 / 729.0 * k4x)
        ay = y + hs * (19372.0 / 6561.0 * k1y - 25360.0 / 2187.0 * k2y
                       + 64448.0 / 6561.0 * k3y - 212.0 / 729.0 * k4y)
        _rhs(&P, ax, ay, &k5x, &k5y)
        ax = x + hs * (9017.0 / 3168.0 * k1x - 355.0 / 33.0 * k2x
                       + 46732.0 / 5247.0 * k3x + 49.0 / 176.0 * k4x
                       - 5103.0 / 18656.0 * k5x)
        ay = y + hs * (9017.0 / 3168.0 * k1y - 355.0 / 33.0 * k2y
                       + 46732.0 / 5247.0 * k3y + 49.0 / 176.0 * k4y
                       - 5103.0 / 18656.0 * k5y)
        _rhs(&P, ax, ay, &k6x, &k6y)
        x1 = x + hs * (35.0 / 384.0 * k1x + 500.0 / 1113.0 * k3x
                       + 125.0 / 192.0 * k4x - 2187.0 / 6784.0 * k5x
                       + 11.0 / 84.0 * k6x)
        y1 = y + hs * (35.0 / 384.0 * k1y + 500.0 / 1113.0 * k3y
                       + 125.0 / 192.0 * k4y - 2187.0 / 6784.0 * k5y
                       + 11.0 / 84.0 * k6y)
        _rhs(&P, x1, y1, &k7x, &k7y)

        errx = hs * (71.0 / 57600.0 * k1x - 71.0 / 16695.0 * k3x
                     + 71.0 / 1920.0 * k4x - 17253.0 / 339200.0 * k5x
                     + 22.0 / 525.0 * k6x - 1.0 / 40.0 * k7x)
        erry = hs * (71.0 / 57600.0 * k1y - 71.0 / 16695.0 * k3y
                     + 71.0 / 1920.0 * k4y - 17253.0 / 339200.0 * k5y
                     + 22.0 / 525.0 * k6y - 1.0 / 40.0 * k7y)
        scx = atol + rtol * max(fabs(x), fabs(x1))
        scy = atol + rtol * max(fabs(y), fabs(y1))
        err = sqrt(0.5 * ((errx / scx) ** 2 + (erry / scy) ** 2))
        if not isfinite(err):
            err = 2.0

        if err > 1.0:
            h *= max(0.2, 0.9 * pow(err, -0.2))
            continue

        if forward and y1 <= 0.0 and y > 0.0:
            tau = _bisect(y, k1y, y1, k7y, hs, 0.0)
            xc = _hermite(x, k1x, x1, k7x, hs, tau)
            xic = xi + hs * tau
            status = STATUS_OVERSHOOT if xc > 1.0 else STATUS_AXIS_INNER
            ev_xi = xic; ev_x = xc; ev_y = 0.0
            break
        if (not forward) and y1 <= 0.0 and y > 0.0 and x1 > 0.0:
            status = STATUS_BACKWARD_AXIS
            ev_xi = xi + hs; ev_x = x1; ev_y = y1
            break
        if (not forward) and x1 <= 0.0:
            tau = _bisect(x, k1x, x1, k7x, hs, 0.0)
            yc = _hermite(y, k1y, y1, k7y, hs, tau)
            status = STATUS_YAXIS
            ev_xi = xi + hs * tau; ev_x = 0.0; ev_y = yc
            break

        if forward and isnan(cross1_xi) and x < 1.0 <= x1:
            tau = _bisect(x, k1x, x1, k7x, hs, 1.0)
            cross1_xi = xi + hs * tau
            cross1_y = _hermite(y, k1y, y1, k7y, hs, tau)

        d = hypot(x1 - 1.0, y1)
        if forward:
            if isnan(s1x) and d <= _SLOPE_D1:
                s1x = x1; s1y = y1
            if isnan(s2x) and d <= _SLOPE_D2:
                s2x = x1; s2y = y1
            if d < eps_p2:
                status = STATUS_NEAR_P2
                xi += hs
                x = x1; y = y1
                ev_xi = xi; ev_x = x; ev_y = y
                xs_l.append(xi); Xs_l.append(x); Ys_l.append(y)
                break

        arc += hypot(x1 - x, y1 - y)
        xi += hs
        x = x1; y = y1
        fx = k7x; fy = k7y
        xs_l.append(xi); Xs_l.append(x); Ys_l.append(y)

        if forward and x > x_max:
            status = STATUS_XMAX
            ev_xi = xi; ev_x = x; ev_y = y
            break
        if arc > arc_cap:
            status = STATUS_ARC_CAP
            ev_xi = xi; ev_x = x; ev_y = y
            break

        if err > 0.0:
            h = min(max_step, h * min(5.0, max(0.2, 0.9 * pow(err, -0.2))))
        else:
            h = min(max_step, h * 5.0)
    else:
        ev_xi = xi; ev_x = x; ev_y = y

    if status in (STATUS_OVERSHOOT, STATUS_AXIS_INNER, STATUS_YAXIS):
        xs_l.append(ev_xi); Xs_l.append(ev_x); Ys_l.append(ev_y)

    return (status,
            np.asarray(xs_l), np.asarray(Xs_l), np.asarray(Ys_l),
            (ev_xi, ev_x, ev_y), (cross1_xi, cross1_y),
            (s1x, s1y, s2x, s2y))


def pde_advance(cnp.ndarray[cnp.float64_t, ndim=1] u,
                double dx, double dt, long steps,
                double n, double p, double q, double k):
    cdef Py_ssize_t N = u.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r0 = np.empty(N)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u1 = np.empty(N)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r1 = np.empty(N)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fl = np.empty(N)

    cdef double[:] uv = u, r0v = r0, u1v = u1, r1v = r1, flv = fl

    cdef bint n_int = _is_integral(n)
    cdef bint p_int = _is_integral(p)
    cdef bint q_int = _is_integral(q)
    cdef long ni = <long>n if n_int else 0
    cdef long pi = <long>p if p_int else 0
    cdef long qi = <long>q if q_int else 0

    cdef double inv_dx2 = 1.0 / (dx * dx)
    cdef double inv_2dx = 1.0 / (2.0 * dx)
    cdef double umin = u[0], umax = u[0]
    cdef Py_ssize_t i
    cdef long s
    cdef double w, wc

    with nogil:
        for i in range(N):
            w = uv[i]
            if w < umin:
                umin = w
            if w > umax:
                umax = w
        for s in range(steps):
            # stage 1
            for i in range(N):
                wc = uv[i]
                if wc < 0.0:
                    wc = 0.0
                flv[i] = _rpow(wc, n, ni, n_int)
            r0v[0] = 0.0
            r0v[N - 1] = 0.0
            for i in range(1, N - 1):
                wc = uv[i]
                if wc < 0.0:
                    wc = 0.0
                r0v[i] = ((uv[i + 1] - 2.0 * uv[i] + uv[i - 1]) * inv_dx2
                          + k * (flv[i + 1] - flv[i - 1]) * inv_2dx
                          + _rpow(wc, p, pi, p_int)
                          - _rpow(wc, q, qi, q_int))
            for i in range(N):
                u1v[i] = uv[i] + dt * r0v[i]
            # stage 2
            for i in range(N):
                wc = u1v[i]
                if wc < 0.0:
                    wc = 0.0
                flv[i] = _rpow(wc, n, ni, n_int)
            r1v[0] = 0.0
            r1v[N - 1] = 0.0
            for i in range(1, N - 1):
                wc = u1v[i]
                if wc < 0.0:
                    wc = 0.0
                r1v[i] = ((u1v[i + 1] - 2.0 * u1v[i] + u1v[i - 1]) * inv_dx2
                          + k * (flv[i + 1] - flv[i - 1]) * inv_2dx
                          + _rpow(wc, p, pi, p_int)
                          - _rpow(wc, q, qi, q_int))
            for i in range(N):
                uv[i] = uv[i] + 0.5 * dt * (r0v[i] + r1v[i])
                w = uv[i]
                if w < umin:
                    umin = w
                if w > umax:
                    umax = w
    return umin, umax
