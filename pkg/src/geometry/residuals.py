"""Direct evaluation of the generalized epipolar and affine constraints."""

import numpy as np

from .pose import AlignedPose, RelativePose, pairwise_essential
from .rig import AffineCorrespondence, ImuAttitude, RigExtrinsics, plucker
from .rotations import cayley_y, imu_rotation, skew


def residuals_with_yaw(
    c: AffineCorrespondence,
    rig: RigExtrinsics,
    R_imu_i: np.ndarray,
    R_imu_j: np.ndarray,
    R_y: np.ndarray,
    t_tilde: np.ndarray,
) -> np.ndarray:
    """
    Constraint residuals for an arbitrary yaw matrix.

    ``R_y`` may be the exact Cayley rotation or the first-order yaw matrix;
    both residuals are linear in ``t_tilde`` and in ``R_y``.

    Returns:
        Array [epipolar, affine_1, affine_2]
    """
    cam_i = rig.camera(c.cam_i)
    cam_j = rig.camera(c.cam_j)

    R = R_imu_j.T @ R_y @ R_imu_i
    t = R_imu_j.T @ np.asarray(t_tilde, dtype=float)

    line_i = plucker(c.x_i, cam_i)
    line_j = plucker(c.x_j, cam_j)
    E = skew(t) @ R
    epipolar = line_j.f @ E @ line_i.f + line_j.f @ R @ line_i.m + line_j.m @ R @ line_i.f

    E_ij = pairwise_essential(cam_i, cam_j, RelativePose(R=R, t=t))
    affine = (E_ij.T @ c.x_j)[:2] + c.A @ (E_ij @ c.x_i)[:2]

    return np.concatenate([[epipolar], affine])


def direct_residuals(
    c: AffineCorrespondence,
    rig: RigExtrinsics,
    imu_i: ImuAttitude,
    imu_j: ImuAttitude,
    p: AlignedPose,
) -> tuple[float, np.ndarray]:
    """
    Evaluate the generalized epipolar residual and the 2-vector affine residual.

    Args:
        c: Affine correspondence
        rig: Rig extrinsics containing both camera ids
        imu_i: Attitude at time i
        imu_j: Attitude at time j
        p: Aligned pose hypothesis

    Returns:
        (epipolar residual, affine residual 2-vector)

    Raises:
        UnknownCameraError: If a camera id is missing from the rig
    """
    r = residuals_with_yaw(c, rig, imu_rotation(imu_i), imu_rotation(imu_j), cayley_y(p.s), p.t_tilde)
    return float(r[0]), r[1:]


def _affine_residual(E: np.ndarray, c: AffineCorrespondence) -> np.ndarray:
    return (E.T @ c.x_j)[:2] + c.A @ (E @ c.x_i)[:2]


def translation_gradient(
    c: AffineCorrespondence,
    rig: RigExtrinsics,
    R_imu_i: np.ndarray,
    R_imu_j: np.ndarray,
    R_y: np.ndarray,
) -> np.ndarray:
    """
    Coefficients of the residuals as a linear function of t_hat = [t_tilde; 1].

    Closed form of the t_tilde-gradient of ``residuals_with_yaw``: column k < 3
    is the response to the k-th axis of t_tilde, column 3 is the residual at
    t_tilde = 0. ``R_y`` enters linearly, so passing alpha * R_y scales the
    result by alpha.

    Returns:
        3x4 array G with residuals_with_yaw(..., t_tilde) == G @ [t_tilde; 1]
    """
    cam_i = rig.camera(c.cam_i)
    cam_j = rig.camera(c.cam_j)
    line_i = plucker(c.x_i, cam_i)
    line_j = plucker(c.x_j, cam_j)

    R = R_imu_j.T @ R_y @ R_imu_i
    G = np.empty((3, 4))

    # t = R_imu_j^T t_tilde, and f'^T [t]_x R f = t . (R f x f')
    G[0, :3] = R_imu_j @ np.cross(R @ line_i.f, line_j.f)
    G[0, 3] = line_j.f @ R @ line_i.m + line_j.m @ R @ line_i.f

    RR_k = R @ cam_i.R
    E_0 = cam_j.R.T @ (R @ skew(cam_i.t) - skew(cam_j.t) @ R) @ cam_i.R
    G[1:, 3] = _affine_residual(E_0, c)
    for k in range(3):
        E_k = cam_j.R.T @ skew(R_imu_j[k]) @ RR_k
        G[1:, k] = _affine_residual(E_k, c)
    return G
