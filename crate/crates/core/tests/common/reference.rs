// Generated by tests/oracle/gen_reference_values.py (mpmath, 40 digits). Do not edit.
pub const GAUSSIAN_TAIL: &[(f64, f64)] = &[
    (-8_f64, 9.9999999999999937790e-1),
    (-5_f64, 9.9999971334842812081e-1),
    (-2_f64, 9.7724986805182079280e-1),
    (-1_f64, 8.4134474606854294859e-1),
    (-0.5_f64, 6.9146246127401310364e-1),
    (0_f64, 5.0000000000000000000e-1),
    (0.5_f64, 3.0853753872598689636e-1),
    (1_f64, 1.5865525393145705141e-1),
    (1.2815515655446004_f64, 1.0000000000000001175e-1),
    (2_f64, 2.2750131948179207200e-2),
    (3_f64, 1.3498980316300945267e-3),
    (5_f64, 2.8665157187919391167e-7),
    (7_f64, 1.2798125438858350044e-12),
    (7.99_f64, 6.7469376867535714207e-16),
    (8_f64, 6.2209605742717841235e-16),
    (8.01_f64, 5.7354221802580498393e-16),
    (8.5_f64, 9.4795348222033183542e-18),
    (10_f64, 7.6198530241605260660e-24),
    (12_f64, 1.7764821120776789977e-33),
    (15_f64, 3.6709661993127508858e-51),
    (20_f64, 2.7536241186062336951e-89),
    (25_f64, 3.0566967063825609164e-138),
    (30_f64, 4.9067139271481870595e-198),
    (35_f64, 1.1249107064724062440e-268),
    (37_f64, 5.7255712225245768227e-300),
];
pub const LOG_GAUSSIAN_TAIL: &[(f64, f64)] = &[
    (-3_f64, -1.3508099647481937988e-3),
    (0_f64, -6.9314718055994530942e-1),
    (3_f64, -6.6077262215103495433),
    (8_f64, -3.5013437159914549896e+1),
    (9_f64, -4.3628149113332115497e+1),
    (20_f64, -2.0391715537109726394e+2),
    (40_f64, -8.0460844201375378817e+2),
    (50_f64, -1.2548313611394199013e+3),
    (100_f64, -5.0055242086942050886e+3),
    (1000_f64, -5.0000782669481218431e+5),
];
pub const P_R_ZERO_ZERO: f64 = 4.8394144903828669960e-1;
pub const GUMBEL_DENSITY_ONE: f64 = 2.5464638004358249582e-1;
pub const ASYMPTOTIC_TAIL_TEN: f64 = 7.6945986267064193463e-24;
pub const ASYMPTOTIC_TAIL_ONE: f64 = 2.4197072451914334980e-1;
pub const RESIDUAL_R3_X05: f64 = 1.7233085283827657439e-1;
pub const LOG_RESIDUAL_R0_X0: f64 = 3.1731050786291410283e-1;
pub const TRUNCATED_MEAN_R2: f64 = 2.3732155328228408673;
pub const RIGHT_EXIT_PROB_R_SQRT2: f64 = 7.8649603525142565329e-2;
pub const GAUSSIAN_B_N: &[(u64, f64)] = &[
    (3, 4.3072729929545749021e-1),
    (10, 1.2815515655446004670),
    (100, 2.3263478740408411009),
    (1000, 3.0902323061678135415),
    (10000, 3.7190164854556805644),
    (1000000, 4.7534243088228989482),
    (100000000, 5.6120012441747887315),
    (1000000000, 5.9978070150076868716),
];
