import json

import pytest

from tosaudit import specificity, textprep
from tosaudit.errors import LexiconError, ReviewError, TosAuditError
from tosaudit.specificity import (
    SentenceFinding, SpecificityCounts, aggregate_counts, analyze_document,
    apply_review, apply_review_records, classify_retention, classify_sharing,
    detect_data_types, detect_entities, ensure_compiled, export_review,
    finding_from_dict, finding_to_dict, inflect_verb,
    load_specificity_lexicons, map_scores, parse_review_file,
    sentence_coverage,
)


@pytest.fixture(scope="module")
def lex():
    return ensure_compiled(load_specificity_lexicons())


def sentence_of(text, index=0):
    sentences = textprep.segment_sentences(text)
    assert len(sentences) >= index + 1
    return sentences[index]


def doc_of(text, platform="demo"):
    return textprep.build_document(platform, text)


class TestInflect:
    def test_regular(self):
        assert inflect_verb("retain") == \
            {"retain", "retains", "retained", "retaining"}

    def test_e_final(self):
        assert inflect_verb("share") == \
            {"share", "shares", "shared", "sharing"}

    def test_sibilant(self):
        assert inflect_verb("process") == \
            {"process", "processes", "processed", "processing"}

    def test_irregular_keep(self):
        assert "kept" in inflect_verb("keep")


class TestDataTypes:
    def test_single_phrase(self, lex):
        s = sentence_of("We collect your email address.")
        findings = detect_data_types(s, lex)
        assert [f.auto_label for f in findings] == ["email address"]
        start, end = findings[0].evidence_span
        assert s.text[start:end] == "email address"

    def test_longest_phrase_wins(self, lex):
        s = sentence_of("We log your approximate location.")
        findings = detect_data_types(s, lex)
        assert [f.auto_label for f in findings] == ["approximate location"]

    def test_duplicates_collapse_within_sentence(self, lex):
        s = sentence_of("Email address here, email address there.")
        findings = detect_data_types(s, lex)
        assert len(findings) == 1

    def test_case_insensitive(self, lex):
        s = sentence_of("We read your IP ADDRESS.")
        assert [f.auto_label for f in detect_data_types(s, lex)] == \
            ["IP address"]

    def test_list_sentence(self, lex):
        s = sentence_of(
            "We collect your phone number, location, and browsing history.")
        labels = {f.auto_label for f in detect_data_types(s, lex)}
        assert labels == {"phone number", "location", "browsing history"}

    def test_no_hits(self, lex):
        s = sentence_of("We value your trust.")
        assert detect_data_types(s, lex) == []


class TestEntities:
    def test_curated_name(self, lex):
        s = sentence_of("We work with Google today.")
        findings = detect_entities(s, lex)
        assert [f.auto_label for f in findings] == ["Google"]

    def test_curated_is_case_sensitive(self, lex):
        s = sentence_of("We searched google results.")
        assert detect_entities(s, lex) == []

    def test_suffix_pattern(self, lex):
        s = sentence_of("Files are stored by Acme Data Corp. every night.")
        findings = detect_entities(s, lex)
        assert [f.auto_label for f in findings] == ["Acme Data Corp."]

    def test_suffix_swallows_nested_curated(self, lex):
        s = sentence_of("Meta Platforms, Inc. operates this service.")
        findings = detect_entities(s, lex)
        assert [f.auto_label for f in findings] == ["Meta Platforms, Inc."]

    def test_curated_and_suffix_mix(self, lex):
        s = sentence_of("We rely on Google and Streamline Media Ltd. daily.")
        labels = [f.auto_label for f in detect_entities(s, lex)]
        assert labels == ["Google", "Streamline Media Ltd."]

    def test_generic_descriptors_never_match(self, lex):
        s = sentence_of("We rely on service providers and vendors.")
        assert detect_entities(s, lex) == []

    def test_dedupe_within_sentence(self, lex):
        s = sentence_of("Google tools and Google accounts differ.")
        assert len(detect_entities(s, lex)) == 1

    def test_sentence_initial_capital_not_entity(self, lex):
        s = sentence_of("The provider stores files.")
        assert detect_entities(s, lex) == []


class TestRetention:
    def test_explicit_digits(self, lex):
        s = sentence_of("We retain logs for 30 days.")
        label, finding = classify_retention(s, lex)
        assert label == "explicit"
        start, end = finding.evidence_span
        assert s.text[start:end] == "retain logs for 30 days"

    def test_explicit_spelled_number(self, lex):
        s = sentence_of("Backups are kept for ninety days.")
        label, _ = classify_retention(s, lex)
        assert label == "explicit"

    def test_explicit_hyphenated_duration(self, lex):
        s = sentence_of("A 30-day retention window applies; we delete after.")
        label, _ = classify_retention(s, lex)
        assert label == "explicit"

    def test_proximity_limit(self, lex):
        s = sentence_of(
            "We retain your records according to the policies described "
            "in the manual that quietly mentions just 30 days.")
        label, finding = classify_retention(s, lex)
        assert label == "none"
        assert finding is None

    def test_vague_phrase(self, lex):
        s = sentence_of("We keep your data as long as necessary.")
        label, finding = classify_retention(s, lex)
        assert label == "vague"
        start, end = finding.evidence_span
        assert s.text[start:end] == "as long as necessary"

    def test_explicit_dominates_vague(self, lex):
        s = sentence_of(
            "We retain data for 30 days or as long as necessary.")
        label, _ = classify_retention(s, lex)
        assert label == "explicit"

    def test_duration_without_verb_is_none(self, lex):
        s = sentence_of("The trial lasts 30 days.")
        label, _ = classify_retention(s, lex)
        assert label == "none"

    def test_verb_without_signal_is_none(self, lex):
        s = sentence_of("We store your preferences.")
        label, _ = classify_retention(s, lex)
        assert label == "none"

    def test_number_without_unit_is_not_duration(self, lex):
        s = sentence_of("We keep 30 copies as long as necessary.")
        label, _ = classify_retention(s, lex)
        # "30" has no adjacent duration unit, so the vague phrase stands
        assert label == "vague"


class TestSharing:
    def test_specific(self, lex):
        s = sentence_of("We share telemetry for fraud detection.")
        label, finding = classify_sharing(s, lex)
        assert label == "specific"
        start, end = finding.evidence_span
        assert s.text[start:end] == "fraud detection"

    def test_generic(self, lex):
        s = sentence_of("We use your data to provide our services.")
        label, _ = classify_sharing(s, lex)
        assert label == "generic"

    def test_negated(self, lex):
        s = sentence_of("We do not share personally identifiable information.")
        label, _ = classify_sharing(s, lex)
        assert label == "negated"

    def test_negation_beats_specific(self, lex):
        s = sentence_of(
            "We will not share your data, even for fraud detection.")
        label, _ = classify_sharing(s, lex)
        assert label == "negated"

    def test_specific_beats_generic(self, lex):
        s = sentence_of(
            "We process data to provide our services and for fraud "
            "detection checks.")
        label, _ = classify_sharing(s, lex)
        assert label == "specific"

    def test_no_verb_is_none(self, lex):
        s = sentence_of("Your data belongs to you.")
        label, finding = classify_sharing(s, lex)
        assert label == "none"
        assert finding is None

    def test_verb_without_cue_is_none(self, lex):
        s = sentence_of("We share updates with you.")
        label, _ = classify_sharing(s, lex)
        assert label == "none"

    def test_inflected_verb_counts(self, lex):
        s = sentence_of("Data is processed for spam detection.")
        label, _ = classify_sharing(s, lex)
        assert label == "specific"


class TestAnalyzeDocument:
    def test_findings_cover_detectors(self, lex):
        doc = doc_of(
            "We collect your email address. We work with Google. "
            "We retain logs for 30 days. We share hashes for fraud "
            "detection.")
        findings = analyze_document(doc, lex)
        detectors = {f.detector for f in findings}
        assert detectors == set(specificity.DETECTORS)
        assert all(f.platform == "demo" for f in findings)

    def test_one_sharing_finding_per_sentence(self, lex):
        doc = doc_of(
            "We share data for fraud detection and also for spam detection.")
        findings = [f for f in analyze_document(doc, lex)
                    if f.detector == "sharing"]
        assert len(findings) == 1


def make_finding(detector, label, platform="p", sentence_index=0, span=(0, 4)):
    return SentenceFinding(
        platform=platform,
        sentence_index=sentence_index,
        detector=detector,
        auto_label=label,
        evidence_span=span,
        sentence_text="stub sentence",
    )


class TestAggregateCounts:
    def test_whatsapp_shaped_findings(self):
        findings = []
        for i in range(13):
            findings.append(make_finding("data_type", f"type {i}",
                                         sentence_index=i))
        for i in range(5):
            findings.append(make_finding("entity", f"Entity {i}",
                                         sentence_index=i))
        for i in range(2):
            findings.append(make_finding("retention", "explicit",
                                         sentence_index=20 + i))
        findings.append(make_finding("sharing", "generic", sentence_index=30))
        for i in range(4):
            findings.append(make_finding("sharing", "specific",
                                         sentence_index=31 + i))
        counts = aggregate_counts(findings)
        assert counts == SpecificityCounts(
            dt=13, en=5, re_explicit=2, re_vague=0, sg=1, ss=4)
        scores = map_scores(counts)
        assert (scores.dt_s, scores.en_s, scores.r_s, scores.s_s) == \
            (2, 2, 2, 2)
        assert scores.composite == 2.0

    def test_distinct_labels_fold_case(self):
        findings = [
            make_finding("data_type", "Email Address", sentence_index=0),
            make_finding("data_type", "email address", sentence_index=1),
        ]
        assert aggregate_counts(findings).dt == 1

    def test_negated_sharing_not_counted(self):
        findings = [make_finding("sharing", "negated")]
        counts = aggregate_counts(findings)
        assert counts.sg == 0 and counts.ss == 0

    def test_mixed_platforms_rejected(self):
        findings = [
            make_finding("data_type", "email", platform="a"),
            make_finding("data_type", "email", platform="b"),
        ]
        with pytest.raises(TosAuditError, match="mixed-document input"):
            aggregate_counts(findings)

    def test_rejected_dropped_only_under_review(self):
        finding = make_finding("sharing", "specific")
        finding.human_label = "rejected"
        assert aggregate_counts([finding], use_review=True).ss == 0
        assert aggregate_counts([finding], use_review=False).ss == 1

    def test_human_relabel_overrides(self):
        finding = make_finding("sharing", "generic")
        finding.human_label = "specific"
        counts = aggregate_counts([finding], use_review=True)
        assert counts.ss == 1 and counts.sg == 0

    def test_empty(self):
        assert aggregate_counts([]) == SpecificityCounts()


class TestMapScores:
    @pytest.mark.parametrize("dt,expected", [
        (0, 0), (1, 1), (2, 1), (3, 1), (4, 2), (15, 2)])
    def test_dt_thresholds(self, dt, expected):
        assert map_scores(SpecificityCounts(dt=dt)).dt_s == expected

    @pytest.mark.parametrize("en,expected", [
        (0, 0), (1, 1), (2, 1), (3, 2), (11, 2)])
    def test_en_thresholds(self, en, expected):
        assert map_scores(SpecificityCounts(en=en)).en_s == expected

    @pytest.mark.parametrize("re_e,re_v,expected", [
        (0, 0, 0), (0, 1, 1), (0, 3, 1), (1, 0, 2), (1, 2, 2), (2, 0, 2)])
    def test_retention_thresholds(self, re_e, re_v, expected):
        counts = SpecificityCounts(re_explicit=re_e, re_vague=re_v)
        assert map_scores(counts).r_s == expected

    @pytest.mark.parametrize("sg,ss,expected", [
        (0, 0, 0), (1, 0, 1), (3, 0, 1), (0, 1, 1), (0, 2, 1),
        (1, 2, 1), (0, 3, 2), (2, 5, 2)])
    def test_sharing_thresholds(self, sg, ss, expected):
        counts = SpecificityCounts(sg=sg, ss=ss)
        assert map_scores(counts).s_s == expected

    def test_composite_on_quarter_grid(self):
        score = map_scores(SpecificityCounts(dt=1, en=3, re_vague=1, ss=1))
        assert score.composite == pytest.approx((1 + 2 + 1 + 1) / 4)
        assert (score.composite * 4) == int(score.composite * 4)

    def test_stage_recorded(self):
        assert map_scores(SpecificityCounts(), "post_review").stage == \
            "post_review"


class TestCoverage:
    def test_fractions(self):
        findings = [
            make_finding("data_type", "email", sentence_index=0),
            make_finding("data_type", "location", sentence_index=0),
            make_finding("sharing", "specific", sentence_index=3),
        ]
        cov = sentence_coverage(findings, 4)
        assert cov["data_type"] == pytest.approx(0.25)
        assert cov["sharing"] == pytest.approx(0.25)
        assert cov["entity"] == 0.0

    def test_zero_sentences(self):
        cov = sentence_coverage([], 0)
        assert set(cov.values()) == {0.0}


class TestFindingSerialization:
    def test_round_trip(self):
        finding = make_finding("retention", "explicit", span=(3, 9))
        finding.human_label = "vague"
        finding.reviewer_note = "duration is conditional"
        data = finding_to_dict(finding)
        back = finding_from_dict(data)
        assert back == finding

    def test_empty_strings_become_none(self):
        data = finding_to_dict(make_finding("sharing", "generic"))
        assert data["human_label"] == ""
        back = finding_from_dict(data)
        assert back.human_label is None


class TestReviewRoundTrip:
    def build_findings(self):
        doc = doc_of(
            "We share one for fraud detection. We share two for content "
            "moderation. We keep data as long as necessary.")
        lex = ensure_compiled(load_specificity_lexicons())
        return analyze_document(doc, lex)

    def test_export_header_and_order(self, tmp_path):
        findings = self.build_findings()
        path = tmp_path / "review.jsonl"
        count = export_review(findings, str(path))
        lines = path.read_text().splitlines()
        header = json.loads(lines[0])
        assert header == {
            "record_type": "header",
            "format": "tosaudit-review",
            "version": 1,
            "finding_count": count,
        }
        records = [json.loads(line) for line in lines[1:]]
        assert len(records) == count
        assert all(r["detector"] in ("retention", "sharing")
                   for r in records)
        keys = [(r["platform"], r["sentence_index"],
                 r["evidence_span"]["start"]) for r in records]
        assert keys == sorted(keys)

    def test_export_can_include_dt_en(self, tmp_path):
        doc = doc_of("We collect your email address from Google.")
        lex = ensure_compiled(load_specificity_lexicons())
        findings = analyze_document(doc, lex)
        path = tmp_path / "review.jsonl"
        assert export_review(findings, str(path)) == 0
        assert export_review(findings, str(path), include_dt_en=True) == 2

    def test_apply_rejection(self, tmp_path):
        findings = self.build_findings()
        path = tmp_path / "review.jsonl"
        export_review(findings, str(path))
        lines = path.read_text().splitlines()
        records = [json.loads(line) for line in lines[1:]]
        sharing = [r for r in records if r["detector"] == "sharing"]
        sharing[0]["human_label"] = "rejected"
        path.write_text("\n".join(
            [lines[0]] + [json.dumps(r) for r in records]) + "\n")
        findings, auto, post = apply_review(findings, str(path))
        assert auto.stage == "auto"
        assert post.stage == "post_review"
        assert aggregate_counts(findings, use_review=False).ss == 2
        assert aggregate_counts(findings, use_review=True).ss == 1

    def test_unmatched_record_raises(self, tmp_path):
        findings = self.build_findings()
        path = tmp_path / "review.jsonl"
        export_review(findings, str(path))
        lines = path.read_text().splitlines()
        record = json.loads(lines[1])
        record["sentence_index"] = 99
        path.write_text(lines[0] + "\n" + json.dumps(record) + "\n")
        with pytest.raises(ReviewError, match="unmatched review record"):
            apply_review(findings, str(path))

    def test_illegal_label_raises(self, tmp_path):
        findings = self.build_findings()
        path = tmp_path / "review.jsonl"
        export_review(findings, str(path))
        lines = path.read_text().splitlines()
        record = json.loads(lines[1])
        record["human_label"] = "fantastic"
        path.write_text(lines[0] + "\n" + json.dumps(record) + "\n")
        with pytest.raises(ReviewError, match="illegal label value"):
            apply_review(findings, str(path))

    def test_missing_header_raises(self, tmp_path):
        path = tmp_path / "review.jsonl"
        path.write_text('{"platform": "p"}\n')
        with pytest.raises(ReviewError, match="not a header"):
            parse_review_file(str(path))

    def test_empty_file_raises(self, tmp_path):
        path = tmp_path / "review.jsonl"
        path.write_text("")
        with pytest.raises(ReviewError, match="empty review file"):
            parse_review_file(str(path))

    def test_unknown_format_raises(self, tmp_path):
        path = tmp_path / "review.jsonl"
        path.write_text('{"record_type": "header", "format": "other"}\n')
        with pytest.raises(ReviewError, match="unknown review format"):
            parse_review_file(str(path))

    def test_reapplication_is_idempotent(self, tmp_path):
        findings = self.build_findings()
        path = tmp_path / "review.jsonl"
        export_review(findings, str(path))
        lines = path.read_text().splitlines()
        records = [json.loads(line) for line in lines[1:]]
        for r in records:
            if r["detector"] == "sharing":
                r["human_label"] = "rejected"
        path.write_text("\n".join(
            [lines[0]] + [json.dumps(r) for r in records]) + "\n")
        _, _, post1 = apply_review(findings, str(path))
        _, _, post2 = apply_review(findings, str(path))
        assert post1 == post2

    def test_reviewer_note_preserved(self):
        finding = make_finding("sharing", "specific")
        apply_review_records([finding], [{
            "platform": "p", "sentence_index": 0, "detector": "sharing",
            "evidence_span": {"start": 0, "end": 4},
            "human_label": "", "reviewer_note": "checked against page",
        }])
        assert finding.human_label is None
        assert finding.reviewer_note == "checked against page"


class TestLexiconLoading:
    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(LexiconError, match="lexicon not found"):
            load_specificity_lexicons(str(tmp_path))

    def test_custom_dir(self, tmp_path):
        (tmp_path / "data_types.json").write_text(json.dumps(
            {"categories": {"identifiers": ["email address"]}}))
        (tmp_path / "entities.json").write_text(json.dumps(
            {"curated": ["Acme"], "corporate_suffixes": ["Inc"],
             "generic_descriptors": []}))
        (tmp_path / "retention.json").write_text(json.dumps(
            {"retention_verbs": ["keep"], "duration_units": ["days"],
             "vague_phrases": ["as long as necessary"]}))
        (tmp_path / "sharing.json").write_text(json.dumps(
            {"sharing_verbs": ["share"], "specific_cues": ["fraud detection"],
             "generic_cues": ["to provide our services"],
             "negation_cues": ["do not share"]}))
        lex = load_specificity_lexicons(str(tmp_path))
        assert lex.known_entities == ("Acme",)

    def test_duplicate_entry_rejected(self, tmp_path):
        (tmp_path / "data_types.json").write_text(json.dumps(
            {"categories": {"a": ["email"], "b": ["Email"]}}))
        (tmp_path / "entities.json").write_text(json.dumps(
            {"curated": ["Acme"], "corporate_suffixes": ["Inc"]}))
        (tmp_path / "retention.json").write_text(json.dumps(
            {"retention_verbs": ["keep"], "duration_units": ["days"],
             "vague_phrases": ["x y"]}))
        (tmp_path / "sharing.json").write_text(json.dumps(
            {"sharing_verbs": ["share"], "specific_cues": ["a b"],
             "generic_cues": ["c d"], "negation_cues": ["e f"]}))
        with pytest.raises(LexiconError, match="duplicate entry"):
            load_specificity_lexicons(str(tmp_path))
