//! Low-weight irreducible polynomials over GF(2).
//!
//! Each entry is `(w, terms)` for `z^w + sum_{e in terms} z^e`, the
//! lexicographically first trinomial with middle term at most `w / 2` when
//! one exists, otherwise the first pentanomial. Every middle exponent is at
//! most `w / 2`, which keeps reduction to two folds.

#[rustfmt::skip]
pub(crate) const IRREDUCIBLE: &[(usize, &[u32])] = &[
    (2, &[1, 0]), (3, &[1, 0]), (4, &[1, 0]), (5, &[2, 0]), (6, &[1, 0]), (7, &[1, 0]),
    (8, &[4, 3, 1, 0]), (9, &[1, 0]), (10, &[3, 0]), (11, &[2, 0]), (12, &[3, 0]),
    (13, &[4, 3, 1, 0]), (14, &[5, 0]), (15, &[1, 0]), (16, &[5, 3, 1, 0]), (17, &[3, 0]),
    (18, &[3, 0]), (19, &[5, 2, 1, 0]), (20, &[3, 0]), (21, &[2, 0]), (22, &[1, 0]),
    (23, &[5, 0]), (24, &[4, 3, 1, 0]), (25, &[3, 0]), (26, &[4, 3, 1, 0]),
    (27, &[5, 2, 1, 0]), (28, &[1, 0]), (29, &[2, 0]), (30, &[1, 0]), (31, &[3, 0]),
    (32, &[7, 3, 2, 0]), (33, &[10, 0]), (34, &[7, 0]), (35, &[2, 0]), (36, &[9, 0]),
    (37, &[6, 4, 1, 0]), (38, &[6, 5, 1, 0]), (39, &[4, 0]), (40, &[5, 4, 3, 0]),
    (41, &[3, 0]), (42, &[7, 0]), (43, &[6, 4, 3, 0]), (44, &[5, 0]), (45, &[4, 3, 1, 0]),
    (46, &[1, 0]), (47, &[5, 0]), (48, &[5, 3, 2, 0]), (49, &[9, 0]), (50, &[4, 3, 2, 0]),
    (51, &[6, 3, 1, 0]), (52, &[3, 0]), (53, &[6, 2, 1, 0]), (54, &[9, 0]), (55, &[7, 0]),
    (56, &[7, 4, 2, 0]), (57, &[4, 0]), (58, &[19, 0]), (59, &[7, 4, 2, 0]), (60, &[1, 0]),
    (61, &[5, 2, 1, 0]), (62, &[29, 0]), (63, &[1, 0]), (64, &[4, 3, 1, 0]), (65, &[18, 0]),
    (66, &[3, 0]), (67, &[5, 2, 1, 0]), (68, &[9, 0]), (69, &[6, 5, 2, 0]),
    (70, &[5, 3, 1, 0]), (71, &[6, 0]), (72, &[10, 9, 3, 0]), (73, &[25, 0]), (74, &[35, 0]),
    (75, &[6, 3, 1, 0]), (76, &[21, 0]), (77, &[6, 5, 2, 0]), (78, &[6, 5, 3, 0]),
    (79, &[9, 0]), (80, &[9, 4, 2, 0]), (81, &[4, 0]), (82, &[8, 3, 1, 0]),
    (83, &[7, 4, 2, 0]), (84, &[5, 0]), (85, &[8, 2, 1, 0]), (86, &[21, 0]), (87, &[13, 0]),
    (88, &[7, 6, 2, 0]), (89, &[38, 0]), (90, &[27, 0]), (91, &[8, 5, 1, 0]), (92, &[21, 0]),
    (93, &[2, 0]), (94, &[21, 0]), (95, &[11, 0]), (96, &[10, 9, 6, 0]), (97, &[6, 0]),
    (98, &[11, 0]), (99, &[6, 3, 1, 0]), (100, &[15, 0]), (101, &[7, 6, 1, 0]),
    (102, &[29, 0]), (103, &[9, 0]), (104, &[4, 3, 1, 0]), (105, &[4, 0]), (106, &[15, 0]),
    (107, &[9, 7, 4, 0]), (108, &[17, 0]), (109, &[5, 4, 2, 0]), (110, &[33, 0]),
    (111, &[10, 0]), (112, &[5, 4, 3, 0]), (113, &[9, 0]), (114, &[5, 3, 2, 0]),
    (115, &[8, 7, 5, 0]), (116, &[4, 2, 1, 0]), (117, &[5, 2, 1, 0]), (118, &[33, 0]),
    (119, &[8, 0]), (120, &[4, 3, 1, 0]), (121, &[18, 0]), (122, &[6, 2, 1, 0]),
    (123, &[2, 0]), (124, &[19, 0]), (125, &[7, 6, 5, 0]), (126, &[21, 0]), (127, &[1, 0]),
    (128, &[7, 2, 1, 0]), (129, &[5, 0]), (130, &[3, 0]), (131, &[8, 3, 2, 0]),
    (132, &[17, 0]), (133, &[9, 8, 2, 0]), (134, &[57, 0]), (135, &[11, 0]),
    (136, &[5, 3, 2, 0]), (137, &[21, 0]), (138, &[8, 7, 1, 0]), (139, &[8, 5, 3, 0]),
    (140, &[15, 0]), (141, &[10, 4, 1, 0]), (142, &[21, 0]), (143, &[5, 3, 2, 0]),
    (144, &[7, 4, 2, 0]), (145, &[52, 0]), (146, &[71, 0]), (147, &[14, 0]), (148, &[27, 0]),
    (149, &[10, 9, 7, 0]), (150, &[53, 0]), (151, &[3, 0]), (152, &[6, 3, 2, 0]),
    (153, &[1, 0]), (154, &[15, 0]), (155, &[62, 0]), (156, &[9, 0]), (157, &[6, 5, 2, 0]),
    (158, &[8, 6, 5, 0]), (159, &[31, 0]), (160, &[5, 3, 2, 0]), (161, &[18, 0]),
    (162, &[27, 0]), (163, &[7, 6, 3, 0]), (164, &[10, 8, 7, 0]), (165, &[9, 8, 3, 0]),
    (166, &[37, 0]), (167, &[6, 0]), (168, &[15, 3, 2, 0]), (169, &[34, 0]), (170, &[11, 0]),
    (171, &[6, 5, 2, 0]), (172, &[1, 0]), (173, &[8, 5, 2, 0]), (174, &[13, 0]),
    (175, &[6, 0]), (176, &[11, 3, 2, 0]), (177, &[8, 0]), (178, &[31, 0]),
    (179, &[4, 2, 1, 0]), (180, &[3, 0]), (181, &[7, 6, 1, 0]), (182, &[81, 0]),
    (183, &[56, 0]), (184, &[9, 8, 7, 0]), (185, &[24, 0]), (186, &[11, 0]),
    (187, &[7, 6, 5, 0]), (188, &[6, 5, 2, 0]), (189, &[6, 5, 2, 0]), (190, &[8, 7, 6, 0]),
    (191, &[9, 0]), (192, &[7, 2, 1, 0]), (193, &[15, 0]), (194, &[87, 0]),
    (195, &[8, 3, 2, 0]), (196, &[3, 0]), (197, &[9, 4, 2, 0]), (198, &[9, 0]),
    (199, &[34, 0]), (200, &[5, 3, 2, 0]), (201, &[14, 0]), (202, &[55, 0]),
    (203, &[8, 7, 1, 0]), (204, &[27, 0]), (205, &[9, 5, 2, 0]), (206, &[10, 9, 5, 0]),
    (207, &[43, 0]), (208, &[9, 3, 1, 0]), (209, &[6, 0]), (210, &[7, 0]),
    (211, &[11, 10, 8, 0]), (212, &[105, 0]), (213, &[6, 5, 2, 0]), (214, &[73, 0]),
    (215, &[23, 0]), (216, &[7, 3, 1, 0]), (217, &[45, 0]), (218, &[11, 0]),
    (219, &[8, 4, 1, 0]), (220, &[7, 0]), (221, &[8, 6, 2, 0]), (222, &[5, 4, 2, 0]),
    (223, &[33, 0]), (224, &[9, 8, 3, 0]), (225, &[32, 0]), (226, &[10, 7, 3, 0]),
    (227, &[10, 9, 4, 0]), (228, &[113, 0]), (229, &[10, 4, 1, 0]), (230, &[8, 7, 6, 0]),
    (231, &[26, 0]), (232, &[9, 4, 2, 0]), (233, &[74, 0]), (234, &[31, 0]),
    (235, &[9, 6, 1, 0]), (236, &[5, 0]), (237, &[7, 4, 1, 0]), (238, &[73, 0]),
    (239, &[36, 0]), (240, &[8, 5, 3, 0]), (241, &[70, 0]), (242, &[95, 0]),
    (243, &[8, 5, 1, 0]), (244, &[111, 0]), (245, &[6, 4, 1, 0]), (246, &[11, 2, 1, 0]),
    (247, &[82, 0]), (248, &[15, 14, 10, 0]), (249, &[35, 0]), (250, &[103, 0]),
    (251, &[7, 4, 2, 0]), (252, &[15, 0]), (253, &[46, 0]), (254, &[7, 2, 1, 0]),
    (255, &[52, 0]), (256, &[10, 5, 2, 0]), (320, &[4, 3, 1, 0]), (384, &[12, 3, 2, 0]),
    (448, &[11, 6, 4, 0]), (512, &[8, 5, 2, 0]), (640, &[14, 3, 2, 0]), (768, &[19, 17, 4, 0]),
    (1024, &[19, 6, 1, 0]), (1536, &[21, 6, 2, 0]), (2048, &[19, 14, 13, 0]),
    (3072, &[11, 10, 5, 0]), (4096, &[27, 15, 1, 0]), (8192, &[9, 5, 2, 0]),
];
