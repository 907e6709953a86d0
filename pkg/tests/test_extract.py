from hypothesis import given, strategies as st

import fixture_corpus
from quarry.extract import (
    FencedBlock, classify_block, classify_blocks, extract_fenced_blocks,
    extract_snippets,
)
from quarry.ingest import parse_registry_doc


def test_single_tagged_fence():
    blocks = extract_fenced_blocks("```js\nlet a=1\n```")
    assert len(blocks) == 1
    assert blocks[0].lang_tag == "js"
    assert blocks[0].text == "let a=1"


def test_two_fences_ordinals_and_tags():
    blocks = extract_fenced_blocks("text\n```\nx\n```\n```bash\nnpm i\n```")
    assert [(b.ordinal, b.lang_tag) for b in blocks] == [(0, None), (1, "bash")]
    assert [b.text for b in blocks] == ["x", "npm i"]


def test_unterminated_fence_captures_to_eof():
    blocks = extract_fenced_blocks("```js\nunclosed")
    assert len(blocks) == 1
    assert blocks[0].text == "unclosed"


def test_tilde_fences_and_indented_code_ignored():
    md = "~~~js\nlet a=1\n~~~\n\n    indented code\n"
    blocks = extract_fenced_blocks(md)
    assert len(blocks) == 1


def test_info_string_uses_first_token():
    blocks = extract_fenced_blocks("```js linenos\nx\n```")
    assert blocks[0].lang_tag == "js"


def test_classify_non_js_tag():
    b = classify_block(FencedBlock(0, "bash", "npm install x"))
    assert b.drop_reason == "non_js_tag"


def test_classify_command_prefix():
    b = classify_block(FencedBlock(0, None, "npm install foo"))
    assert b.drop_reason == "command_prefix"


def test_classify_json_literal():
    b = classify_block(FencedBlock(0, None, '{ "a": 1 }'))
    assert b.drop_reason == "json_literal"


def test_js_object_literal_is_not_json():
    # unquoted keys fail strict JSON parsing and stay
    b = classify_block(FencedBlock(0, None, "x({ a: 1 })"))
    assert b.drop_reason is None


def test_mixed_blocks_keep_ordinals():
    doc = {"name": "p", "readme": "```js\na\n```\n```bash\nb\n```\n```\nlet c=1\n```"}
    snippets = extract_snippets(parse_registry_doc(doc))
    assert [s.ordinal for s in snippets] == [0, 2]


def test_no_fences_gives_empty_list():
    doc = {"name": "p", "readme": "just words"}
    assert extract_snippets(parse_registry_doc(doc)) == []


def test_json_only_readme_gives_empty_list():
    doc = {"name": "p", "readme": '```\n{"a": 1}\n```'}
    assert extract_snippets(parse_registry_doc(doc)) == []


def test_fixture_corpus_labels_match_exactly():
    for pkg in fixture_corpus.PACKAGES:
        blocks = classify_blocks(pkg.readme)
        kept = [b.ordinal for b in blocks if b.drop_reason is None]
        drops = {b.ordinal: b.drop_reason for b in blocks if b.drop_reason}
        assert kept == pkg.expected_kept_ordinals, pkg.name
        assert drops == pkg.expected_drops, pkg.name


def test_partition_property():
    for pkg in fixture_corpus.PACKAGES:
        blocks = classify_blocks(pkg.readme)
        kept = {b.ordinal for b in blocks if b.drop_reason is None}
        dropped = {b.ordinal for b in blocks if b.drop_reason is not None}
        assert kept | dropped == {b.ordinal for b in blocks}
        assert not (kept & dropped)


@given(st.text(max_size=400))
def test_extraction_is_deterministic_and_ordered(md):
    first = extract_fenced_blocks(md)
    second = extract_fenced_blocks(md)
    assert [(b.ordinal, b.lang_tag, b.text) for b in first] == \
        [(b.ordinal, b.lang_tag, b.text) for b in second]
    assert [b.ordinal for b in first] == list(range(len(first)))
