package org.example.generics;

import java.util.HashMap;
import java.util.Map;
import org.junit.Test;

public class GenericsHolderTest {
    @Test
    public void countsWords() {
        Map<String, Integer> counts = new HashMap<String, Integer>();
        String[] text = {"a", "b", "a"};
        for (String word : text) {
            counts.put(word, counts.getOrDefault(word, 0) + 1);
        }
        assertEquals(Integer.valueOf(2), counts.get("a"));
    }
}
