//! Published within-session summary tables (percent, mean ± std over
//! subjects), kept as reference (not reproduced). Used for side-by-side
//! display and to check the summary renderer against a known layout.

pub struct ReferenceRow {
    pub pipeline: &'static str,
    /// (mean, std, bold) per dataset column.
    pub cells: &'static [(f64, f64, bool)],
    /// Average column as printed.
    pub average: &'static str,
    pub average_bold: bool,
}

pub struct ReferenceTable {
    pub title: &'static str,
    pub metric: &'static str,
    pub datasets: &'static [&'static str],
    pub rows: &'static [ReferenceRow],
    /// Bottom average row as printed, dataset columns then the overall value.
    pub average_row: &'static [&'static str],
}

pub const REFERENCE_LABEL: &str = "reference (not reproduced)";

#[rustfmt::skip]
pub static REFERENCE_TABLES: &[ReferenceTable] = &[
    ReferenceTable {
        title: "Motor imagery, all classes",
        metric: "accuracy",
        datasets: &["AlexandreMotorImagery", "BNCI2014-001", "PhysionetMotorImagery", "Schirrmeister2017", "Weibo2014", "Zhou2016"],
        rows: &[
            ReferenceRow { pipeline: "ACM+TS+SVM", cells: &[(69.37, 15.07, false), (77.82, 12.23, true), (55.44, 14.87, false), (82.50, 10.20, false), (63.89, 11.01, true), (85.25, 4.06, true)], average: "72.38", average_bold: false },
            ReferenceRow { pipeline: "CSP+LDA", cells: &[(61.04, 17.22, false), (65.99, 15.47, false), (47.73, 14.35, false), (72.97, 10.42, false), (39.45, 11.87, false), (82.96, 5.20, false)], average: "61.69", average_bold: false },
            ReferenceRow { pipeline: "CSP+SVM", cells: &[(62.92, 16.89, false), (66.88, 15.22, false), (48.52, 14.62, false), (75.89, 10.55, false), (44.08, 11.95, false), (83.08, 5.33, false)], average: "63.56", average_bold: false },
            ReferenceRow { pipeline: "DLCSPauto+shLDA", cells: &[(60.63, 17.91, false), (66.31, 15.36, false), (46.85, 14.65, false), (72.82, 10.44, false), (38.84, 11.97, false), (82.06, 5.57, false)], average: "61.25", average_bold: false },
            ReferenceRow { pipeline: "DeepConvNet", cells: &[(37.71, 4.56, false), (35.29, 8.26, false), (27.68, 3.91, false), (56.78, 18.11, false), (24.17, 9.80, false), (55.69, 5.61, false)], average: "39.55", average_bold: false },
            ReferenceRow { pipeline: "EEGITNet", cells: &[(36.04, 3.43, false), (35.55, 6.35, false), (26.15, 4.95, false), (70.44, 14.68, false), (25.78, 8.00, false), (50.68, 16.27, false)], average: "40.77", average_bold: false },
            ReferenceRow { pipeline: "EEGNeX", cells: &[(37.71, 9.64, false), (45.62, 15.29, false), (26.69, 5.64, false), (67.56, 14.15, false), (30.22, 11.02, false), (56.42, 11.29, false)], average: "44.03", average_bold: false },
            ReferenceRow { pipeline: "EEGNet-8,2", cells: &[(43.96, 8.62, false), (60.46, 20.20, false), (29.04, 7.03, false), (76.99, 13.05, false), (35.35, 14.05, false), (83.34, 3.58, false)], average: "54.86", average_bold: false },
            ReferenceRow { pipeline: "EEGTCNet", cells: &[(34.17, 1.86, false), (41.65, 13.73, false), (25.79, 3.85, false), (71.11, 11.96, false), (17.95, 3.88, false), (37.19, 2.57, false)], average: "37.98", average_bold: false },
            ReferenceRow { pipeline: "FBCSP+SVM", cells: &[(65.00, 17.56, false), (66.53, 12.05, false), (45.49, 12.54, false), (75.94, 8.59, false), (45.21, 10.05, false), (81.99, 4.65, false)], average: "63.36", average_bold: false },
            ReferenceRow { pipeline: "FgMDM", cells: &[(65.63, 15.63, false), (70.14, 15.13, false), (55.04, 14.17, false), (82.97, 10.08, false), (56.94, 9.26, false), (83.07, 4.96, false)], average: "68.97", average_bold: false },
            ReferenceRow { pipeline: "MDM", cells: &[(60.62, 13.69, false), (61.60, 14.20, false), (42.96, 12.98, false), (52.03, 10.11, false), (33.41, 8.67, false), (76.05, 7.10, false)], average: "54.45", average_bold: false },
            ReferenceRow { pipeline: "ShallowConvNet", cells: &[(50.00, 12.94, false), (72.47, 16.50, false), (41.87, 12.50, false), (85.13, 9.57, false), (48.94, 10.36, false), (85.02, 3.78, false)], average: "63.91", average_bold: false },
            ReferenceRow { pipeline: "TS+EL", cells: &[(69.79, 13.75, true), (72.38, 14.85, false), (59.93, 14.07, true), (85.53, 9.40, true), (63.84, 8.77, false), (84.54, 4.93, false)], average: "72.67", average_bold: true },
            ReferenceRow { pipeline: "TS+LR", cells: &[(69.17, 14.79, false), (71.97, 15.46, false), (58.55, 14.06, false), (84.60, 9.28, false), (62.76, 8.39, false), (84.88, 4.63, false)], average: "71.99", average_bold: false },
            ReferenceRow { pipeline: "TS+SVM", cells: &[(67.92, 12.74, false), (70.76, 15.08, false), (58.46, 15.15, false), (84.41, 9.56, false), (61.47, 9.62, false), (83.66, 4.55, false)], average: "71.11", average_bold: false },
        ],
        average_row: &["55.73", "61.34", "43.51", "74.85", "43.27", "74.74", "58.91"],
    },
    ReferenceTable {
        title: "Motor imagery, left hand vs right hand",
        metric: "roc_auc",
        datasets: &["BNCI2014-001", "BNCI2014-004", "Cho2017", "GrosseWentrup2009", "Lee2019-MI", "PhysionetMotorImagery", "Schirrmeister2017", "Shin2017A", "Weibo2014", "Zhou2016"],
        rows: &[
            ReferenceRow { pipeline: "ACM+TS+SVM", cells: &[(91.71, 10.30, true), (82.67, 15.33, true), (73.56, 14.54, false), (86.60, 15.12, false), (83.05, 13.97, false), (63.55, 21.24, false), (85.82, 13.98, false), (68.97, 23.45, false), (84.78, 13.33, false), (95.03, 4.76, false)], average: "81.57", average_bold: false },
            ReferenceRow { pipeline: "CSP+LDA", cells: &[(82.34, 17.26, false), (80.10, 14.93, false), (71.38, 14.54, false), (76.44, 20.95, false), (76.88, 17.41, false), (65.75, 17.37, false), (77.23, 18.43, false), (72.30, 21.79, true), (80.72, 15.29, false), (93.15, 6.88, false)], average: "77.63", average_bold: false },
            ReferenceRow { pipeline: "CSP+SVM", cells: &[(83.07, 16.53, false), (79.27, 15.68, false), (71.92, 14.25, false), (77.81, 21.27, false), (77.27, 16.73, false), (65.71, 17.90, false), (79.24, 20.07, false), (70.11, 22.19, false), (79.84, 15.86, false), (92.96, 7.86, false)], average: "77.72", average_bold: false },
            ReferenceRow { pipeline: "DLCSPauto+shLDA", cells: &[(82.75, 16.69, false), (79.87, 15.11, false), (71.16, 14.53, false), (76.40, 20.83, false), (76.69, 17.23, false), (65.07, 17.68, false), (77.02, 18.48, false), (70.34, 23.30, false), (80.16, 15.23, false), (92.56, 7.21, false)], average: "77.2", average_bold: false },
            ReferenceRow { pipeline: "DeepConvNet", cells: &[(82.07, 15.52, false), (72.36, 18.53, false), (71.67, 12.91, false), (82.38, 15.39, false), (70.65, 15.76, false), (59.57, 16.77, false), (81.23, 17.39, false), (56.03, 19.18, false), (73.64, 15.78, false), (94.42, 6.21, false)], average: "74.4", average_bold: false },
            ReferenceRow { pipeline: "EEGITNet", cells: &[(75.27, 16.37, false), (65.10, 15.32, false), (57.20, 12.21, false), (72.19, 14.71, false), (59.17, 11.72, false), (52.71, 11.11, false), (74.66, 20.52, false), (52.18, 16.78, false), (59.35, 14.06, false), (69.41, 14.66, false)], average: "63.72", average_bold: false },
            ReferenceRow { pipeline: "EEGNeX", cells: &[(66.28, 13.22, false), (66.53, 17.10, false), (53.28, 10.60, false), (57.00, 7.52, false), (55.12, 10.05, false), (51.20, 10.63, false), (68.58, 19.37, false), (49.02, 17.58, false), (57.97, 15.65, false), (61.56, 14.60, false)], average: "58.65", average_bold: false },
            ReferenceRow { pipeline: "EEGNet-8,2", cells: &[(77.15, 19.33, false), (69.50, 19.50, false), (66.79, 16.34, false), (83.02, 18.08, false), (65.67, 16.43, false), (59.55, 15.95, false), (80.20, 18.13, false), (57.99, 17.28, false), (66.46, 21.78, false), (94.84, 2.83, false)], average: "72.12", average_bold: false },
            ReferenceRow { pipeline: "EEGTCNet", cells: &[(67.46, 20.81, false), (69.70, 19.55, false), (58.34, 12.63, false), (68.45, 16.27, false), (55.68, 12.75, false), (55.90, 12.74, false), (75.62, 22.33, false), (51.26, 16.77, false), (63.16, 18.32, false), (82.24, 9.40, false)], average: "64.78", average_bold: false },
            ReferenceRow { pipeline: "FBCSP+SVM", cells: &[(84.44, 16.00, false), (80.39, 16.05, false), (67.91, 15.63, false), (79.65, 18.63, false), (75.07, 16.97, false), (58.45, 13.93, false), (81.44, 17.89, false), (65.63, 21.64, false), (76.81, 18.88, false), (92.64, 5.01, false)], average: "76.24", average_bold: false },
            ReferenceRow { pipeline: "FgMDM", cells: &[(86.53, 12.14, false), (79.28, 15.25, false), (72.90, 12.70, false), (87.02, 13.20, false), (81.34, 13.93, false), (68.46, 19.06, true), (86.71, 13.79, false), (70.86, 23.36, false), (78.41, 14.85, false), (92.54, 6.67, false)], average: "80.41", average_bold: false },
            ReferenceRow { pipeline: "LogVar+LDA", cells: &[(77.96, 15.09, false), (78.51, 15.25, false), (64.49, 10.08, false), (78.71, 11.69, false), (66.21, 12.06, false), (61.94, 14.41, false), (78.44, 13.76, false), (61.78, 22.77, false), (74.13, 10.40, false), (88.39, 8.57, false)], average: "73.06", average_bold: false },
            ReferenceRow { pipeline: "LogVar+SVM", cells: &[(75.86, 16.45, false), (78.30, 15.18, false), (65.46, 11.71, false), (81.73, 12.40, false), (73.83, 13.85, false), (62.35, 16.87, false), (79.42, 13.66, false), (61.38, 22.68, false), (74.85, 11.33, false), (88.47, 8.50, false)], average: "74.17", average_bold: false },
            ReferenceRow { pipeline: "MDM", cells: &[(81.69, 14.94, false), (77.66, 15.78, false), (63.39, 13.69, false), (64.29, 8.04, false), (70.23, 13.87, false), (54.76, 16.79, false), (61.53, 16.41, false), (62.99, 21.25, false), (58.80, 16.13, false), (90.70, 7.11, false)], average: "68.6", average_bold: false },
            ReferenceRow { pipeline: "ShallowConvNet", cells: &[(86.17, 13.74, false), (72.36, 18.05, false), (73.84, 14.95, false), (86.53, 13.00, false), (75.83, 15.04, false), (65.19, 15.80, false), (84.82, 15.29, false), (60.80, 19.27, false), (79.10, 12.63, false), (95.65, 5.55, true)], average: "78.03", average_bold: false },
            ReferenceRow { pipeline: "TRCSP+LDA", cells: &[(79.84, 16.28, false), (79.78, 15.22, false), (71.85, 13.84, false), (78.29, 16.66, false), (76.26, 15.41, false), (67.24, 17.23, false), (79.14, 15.91, false), (67.30, 23.19, false), (79.33, 14.43, false), (93.53, 6.38, false)], average: "77.25", average_bold: false },
            ReferenceRow { pipeline: "TS+EL", cells: &[(86.44, 13.20, false), (79.75, 15.44, false), (76.23, 14.21, true), (89.25, 12.00, true), (84.74, 13.19, true), (67.91, 20.03, false), (88.65, 12.98, true), (68.68, 23.64, false), (85.29, 12.10, true), (94.35, 6.04, false)], average: "82.13", average_bold: true },
            ReferenceRow { pipeline: "TS+LR", cells: &[(87.41, 12.58, false), (80.09, 15.01, false), (75.01, 13.71, false), (87.60, 13.20, false), (83.09, 13.46, false), (67.28, 19.19, false), (87.22, 13.83, false), (69.31, 23.06, false), (83.62, 13.88, false), (94.16, 6.33, false)], average: "81.48", average_bold: false },
            ReferenceRow { pipeline: "TS+SVM", cells: &[(86.48, 13.58, false), (79.41, 15.26, false), (74.62, 14.19, false), (88.08, 13.58, false), (83.57, 14.08, false), (68.18, 19.92, false), (87.64, 13.48, false), (68.45, 24.25, false), (83.72, 14.28, false), (93.37, 6.30, false)], average: "81.35", average_bold: false },
        ],
        average_row: &["81.1", "76.35", "68.47", "79.02", "73.18", "62.15", "79.72", "63.44", "74.74", "89.47", "74.76"],
    },
    ReferenceTable {
        title: "Motor imagery, right hand vs feet",
        metric: "roc_auc",
        datasets: &["AlexandreMotorImagery", "BNCI2014-001", "BNCI2014-002", "BNCI2015-001", "BNCI2015-004", "PhysionetMotorImagery", "Schirrmeister2017", "Weibo2014", "Zhou2016"],
        rows: &[
            ReferenceRow { pipeline: "ACM+TS+SVM", cells: &[(86.56, 12.26, true), (97.32, 3.35, true), (88.60, 10.71, true), (93.01, 8.09, true), (62.60, 14.62, true), (93.33, 8.46, false), (98.67, 3.06, false), (93.25, 4.12, true), (97.18, 3.00, true)], average: "90.06", average_bold: true },
            ReferenceRow { pipeline: "CSP+LDA", cells: &[(77.19, 17.58, false), (91.52, 10.39, false), (80.98, 14.79, false), (88.52, 10.75, false), (54.02, 11.33, false), (86.41, 13.96, false), (97.02, 5.17, false), (88.59, 6.36, false), (95.20, 3.17, false)], average: "84.38", average_bold: false },
            ReferenceRow { pipeline: "CSP+SVM", cells: &[(78.59, 20.14, false), (91.04, 10.35, false), (81.21, 15.30, false), (89.19, 10.08, false), (52.08, 11.05, false), (88.04, 12.57, false), (97.50, 4.90, false), (88.64, 5.90, false), (94.95, 3.53, false)], average: "84.58", average_bold: false },
            ReferenceRow { pipeline: "DLCSPauto+shLDA", cells: &[(77.03, 18.93, false), (91.54, 10.37, false), (80.45, 15.52, false), (88.87, 10.42, false), (53.02, 10.75, false), (86.81, 13.34, false), (96.95, 5.22, false), (88.48, 6.53, false), (94.43, 3.41, false)], average: "84.18", average_bold: false },
            ReferenceRow { pipeline: "DeepConvNet", cells: &[(61.88, 19.05, false), (88.27, 12.19, false), (87.56, 11.25, false), (88.12, 13.19, false), (57.08, 12.29, false), (71.49, 15.88, false), (95.90, 7.14, false), (79.29, 12.63, false), (95.92, 3.66, false)], average: "80.61", average_bold: false },
            ReferenceRow { pipeline: "EEGITNet", cells: &[(47.50, 9.46, false), (75.98, 13.09, false), (70.90, 17.50, false), (71.95, 16.76, false), (51.41, 6.40, false), (54.69, 11.97, false), (96.04, 8.62, false), (62.54, 12.32, false), (80.40, 17.12, false)], average: "67.93", average_bold: false },
            ReferenceRow { pipeline: "EEGNeX", cells: &[(52.34, 14.81, false), (64.36, 13.49, false), (69.95, 20.12, false), (72.34, 19.83, false), (53.02, 9.69, false), (51.77, 12.06, false), (89.49, 16.91, false), (60.18, 11.70, false), (64.80, 16.64, false)], average: "64.25", average_bold: false },
            ReferenceRow { pipeline: "EEGNet-8,2", cells: &[(64.22, 16.01, false), (88.55, 14.92, false), (83.93, 16.31, false), (90.43, 11.75, false), (54.20, 8.20, false), (73.78, 15.59, false), (96.50, 8.07, false), (78.15, 14.46, false), (94.58, 3.21, false)], average: "80.48", average_bold: false },
            ReferenceRow { pipeline: "EEGTCNet", cells: &[(61.09, 22.06, false), (75.21, 18.53, false), (73.92, 19.02, false), (77.21, 18.55, false), (51.22, 5.84, false), (57.03, 13.25, false), (97.15, 7.70, false), (62.37, 12.42, false), (85.46, 16.42, false)], average: "71.19", average_bold: false },
            ReferenceRow { pipeline: "FBCSP+SVM", cells: &[(80.78, 18.86, false), (93.55, 6.29, false), (80.39, 16.83, false), (91.57, 7.66, false), (52.51, 9.82, false), (83.97, 12.43, false), (97.40, 4.18, false), (88.27, 7.91, false), (94.63, 3.94, false)], average: "84.78", average_bold: false },
            ReferenceRow { pipeline: "FgMDM", cells: &[(79.84, 17.80, false), (93.52, 8.18, false), (84.77, 11.26, false), (90.18, 9.77, false), (58.31, 12.63, false), (89.67, 10.65, false), (98.48, 3.45, false), (88.56, 4.63, false), (96.04, 2.67, false)], average: "86.6", average_bold: false },
            ReferenceRow { pipeline: "MDM", cells: &[(74.22, 21.19, false), (89.13, 10.38, false), (77.48, 14.11, false), (86.20, 12.99, false), (48.45, 9.62, false), (81.78, 11.64, false), (84.67, 13.13, false), (65.18, 9.75, false), (92.21, 4.31, false)], average: "77.7", average_bold: false },
            ReferenceRow { pipeline: "ShallowConvNet", cells: &[(64.22, 18.33, false), (93.00, 8.05, false), (87.60, 12.05, false), (91.41, 10.88, false), (57.23, 12.36, false), (74.75, 14.98, false), (98.06, 4.35, false), (88.70, 5.60, false), (97.06, 1.86, false)], average: "83.56", average_bold: false },
            ReferenceRow { pipeline: "TS+EL", cells: &[(81.41, 21.36, false), (94.45, 6.74, false), (85.98, 11.38, false), (91.19, 8.49, false), (58.70, 13.37, false), (94.09, 7.17, false), (98.56, 3.01, false), (92.32, 3.98, false), (96.59, 2.82, false)], average: "88.14", average_bold: false },
            ReferenceRow { pipeline: "TS+LR", cells: &[(83.75, 17.47, false), (94.45, 7.06, false), (85.86, 11.01, false), (91.09, 8.71, false), (61.01, 14.22, false), (93.15, 7.40, false), (98.60, 3.08, false), (91.53, 4.53, false), (96.76, 2.58, false)], average: "88.47", average_bold: false },
            ReferenceRow { pipeline: "TS+SVM", cells: &[(82.66, 18.16, false), (94.01, 7.60, false), (86.19, 11.50, false), (90.81, 8.95, false), (62.55, 15.30, false), (94.27, 7.19, true), (98.72, 2.92, true), (91.84, 4.25, false), (96.11, 2.99, false)], average: "88.57", average_bold: false },
        ],
        average_row: &["72.08", "88.49", "81.61", "87.01", "55.46", "79.69", "96.23", "81.74", "92.02", "81.59"],
    },
    ReferenceTable {
        title: "P300",
        metric: "roc_auc",
        datasets: &["BNCI2014-008", "BNCI2014-009", "BNCI2015-003", "BrainInvaders2012", "BrainInvaders2013a", "BrainInvaders2014a", "BrainInvaders2014b", "BrainInvaders2015a", "BrainInvaders2015b", "Cattan2019-VR", "EPFLP300", "Huebner2017", "Huebner2018", "Lee2019-ERP", "Sosulski2019"],
        rows: &[
            ReferenceRow { pipeline: "ERPCov+MDM", cells: &[(74.30, 9.77, false), (81.16, 10.13, false), (76.79, 10.95, false), (78.77, 10.32, false), (80.59, 9.36, false), (71.62, 11.17, false), (78.57, 12.36, false), (80.02, 10.07, false), (75.04, 15.85, false), (80.76, 10.07, false), (71.97, 10.88, false), (94.47, 8.26, false), (95.15, 3.72, false), (74.43, 13.26, false), (68.17, 13.59, false)], average: "78.79", average_bold: false },
            ReferenceRow { pipeline: "ERPCov(svdn4)+MDM", cells: &[(75.42, 9.91, false), (84.52, 8.83, false), (76.93, 11.26, false), (79.02, 10.53, false), (82.07, 8.46, false), (72.11, 11.64, false), (76.48, 12.83, false), (77.92, 10.33, false), (77.09, 15.81, false), (80.67, 9.47, false), (71.44, 10.20, false), (96.21, 6.50, false), (96.61, 1.89, false), (82.47, 12.56, false), (70.63, 13.79, false)], average: "79.97", average_bold: false },
            ReferenceRow { pipeline: "XDAWN+LDA", cells: &[(82.24, 5.26, false), (64.03, 3.91, false), (78.62, 7.19, false), (64.41, 4.14, false), (76.74, 7.16, false), (66.60, 7.54, false), (83.73, 10.62, false), (76.02, 10.46, false), (77.22, 13.73, false), (67.16, 6.11, false), (62.98, 5.38, false), (97.74, 2.84, false), (97.54, 1.58, false), (96.45, 3.93, false), (67.49, 7.44, false)], average: "77.27", average_bold: false },
            ReferenceRow { pipeline: "XDAWNCov+MDM", cells: &[(77.62, 9.81, false), (92.04, 5.97, false), (83.08, 7.55, true), (88.22, 5.90, false), (90.97, 5.52, false), (80.88, 11.01, false), (91.58, 10.02, false), (92.57, 5.03, false), (83.48, 12.05, false), (88.53, 7.34, false), (83.20, 9.05, false), (98.07, 2.09, false), (97.78, 1.04, false), (97.70, 2.68, false), (86.07, 7.15, false)], average: "88.79", average_bold: false },
            ReferenceRow { pipeline: "XDAWNCov+TS+SVM", cells: &[(85.61, 4.43, true), (93.43, 5.11, true), (82.95, 8.57, false), (90.99, 4.79, true), (92.71, 4.92, true), (85.77, 9.75, true), (91.88, 9.94, true), (93.05, 4.98, true), (84.56, 12.09, true), (90.68, 6.29, true), (84.29, 8.53, true), (98.69, 1.78, true), (98.47, 0.97, true), (98.41, 2.03, true), (87.28, 6.92, true)], average: "90.58", average_bold: true },
        ],
        average_row: &["79.04", "83.03", "79.67", "80.28", "84.61", "75.4", "84.45", "83.91", "79.48", "81.56", "74.78", "97.04", "97.11", "89.89", "75.93", "83.08"],
    },
    ReferenceTable {
        title: "SSVEP",
        metric: "accuracy",
        datasets: &["Kalunga2016", "Lee2019-SSVEP", "MAMEM1", "MAMEM2", "MAMEM3", "Nakanishi2015", "Wang2016"],
        rows: &[
            ReferenceRow { pipeline: "CCA", cells: &[(25.40, 2.51, false), (23.86, 3.72, false), (19.17, 5.01, false), (23.60, 4.10, false), (13.80, 7.47, false), (8.15, 0.74, false), (2.48, 1.01, false)], average: "16.64", average_bold: false },
            ReferenceRow { pipeline: "MsetCCA", cells: &[(22.67, 4.23, false), (25.10, 3.81, false), (20.50, 2.37, false), (22.08, 1.76, false), (27.60, 3.01, false), (7.10, 1.50, false), (4.00, 1.10, false)], average: "18.43", average_bold: false },
            ReferenceRow { pipeline: "MDM", cells: &[(70.89, 13.44, true), (75.38, 18.38, false), (27.31, 11.64, false), (23.12, 6.29, false), (34.40, 9.96, false), (78.77, 19.06, false), (54.77, 21.95, false)], average: "52.09", average_bold: false },
            ReferenceRow { pipeline: "TS+LR", cells: &[(70.86, 11.64, false), (89.44, 13.84, true), (53.71, 24.25, true), (39.36, 12.06, true), (42.10, 14.33, true), (87.22, 15.96, true), (67.52, 20.04, true)], average: "64.32", average_bold: true },
            ReferenceRow { pipeline: "TS+SVM", cells: &[(68.95, 13.73, false), (88.58, 14.47, false), (50.58, 23.34, false), (34.80, 11.76, false), (40.20, 14.41, false), (86.30, 15.88, false), (59.58, 20.57, false)], average: "61.28", average_bold: false },
            ReferenceRow { pipeline: "TRCA", cells: &[(24.84, 7.24, false), (64.01, 15.27, false), (24.24, 6.65, false), (24.24, 2.93, false), (23.70, 3.49, false), (83.21, 10.80, false), (2.79, 1.03, false)], average: "35.29", average_bold: false },
        ],
        average_row: &["47.27", "61.06", "32.58", "27.87", "30.3", "58.46", "31.86", "41.34"],
    },
];
